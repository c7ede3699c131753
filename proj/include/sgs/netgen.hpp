#ifndef SGS_NETGEN_HPP
#define SGS_NETGEN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgs/engine.hpp"
#include "sgs/graph.hpp"
#include "sgs/network.hpp"

namespace sgs {

enum class GraphFamily { erdos_renyi, barabasi_albert, watts_strogatz, er_islands };

/// Short names: er, ba, ws, islands.
std::string_view to_string(GraphFamily f) noexcept;
std::optional<GraphFamily> parse_family(std::string_view text) noexcept;

struct GenSpec {
  GraphFamily family = GraphFamily::erdos_renyi;
  int n = 50;
  double avg_mb_size = 3.3;  // S
  int categories = 2;        // C
  double evidence_fraction = 0.5;
  std::uint64_t seed = 1;
  int islands = 3;
  double rewire_prob = 0.1;
  /// Family density parameter; calibrated against avg_mb_size when unset.
  /// ER and islands: edge probability. BA: edges per new node. WS: lattice
  /// neighbours per side. Fractional counts are rounded at random per node.
  std::optional<double> density;
};

/// Throws ArgumentError on n < 2, C < 2, f outside [0, 1], S <= 0, fewer
/// than one island or rewire_prob outside [0, 1].
void check_spec(const GenSpec& spec);

/// Mean Markov blanket size over all nodes.
double mean_markov_blanket_size(const Dag& dag);

/// Bisection on the family density so that the mean blanket size over a
/// fixed set of pilot graphs matches spec.avg_mb_size. Depends only on the
/// family, n, islands and rewire_prob, never on spec.seed. Throws
/// ArgumentError when the target exceeds what the family can reach.
double calibrate_density(const GenSpec& spec);

/// Random DAG of the requested family. Edges always run from lower to
/// higher id, so the result is acyclic by construction.
Dag gen_dag(const GenSpec& spec);

/// Each CPT row: C uniform(0,1) draws, normalized.
Network gen_cpts(const Dag& dag, int categories, std::uint64_t seed);

/// gen_dag followed by gen_cpts with a derived seed.
Network gen_network(const GenSpec& spec);

/// floor(f * n) nodes without replacement; states taken from one forward
/// sample so the evidence has positive probability.
Evidence pick_evidence(const Network& bn, double fraction, std::uint64_t seed);

/// sqrt(mean((truth - x_i)^2)) / truth. Throws DomainError when truth <= 0
/// and ArgumentError when estimates is empty.
double nrmse(double truth, const std::vector<double>& estimates);

struct BenchRow {
  std::string family;
  int n = 0;
  int categories = 0;
  double evidence_fraction = 0.0;
  double avg_mb_size = 0.0;
  std::string method;
  std::size_t budget = 0;
  double wall_time_ms = 0.0;  // mean per repetition
  double nrmse = 0.0;
  int repetitions = 0;

  bool operator==(const BenchRow&) const = default;
};

inline constexpr const char* kBenchHeader = "family,n,C,f,S,method,budget,wall_time_ms,nrmse,rep";

struct BenchOptions {
  std::vector<Method> methods{Method::sgs, Method::lbp_is, Method::gs};
  std::vector<std::size_t> budgets{100, 1000};
  int repetitions = 10;
  SgsConfig base;
};

/// For every spec, method and budget, repeat the estimate with derived
/// seeds and record mean wall time and NRMSE against the junction-tree
/// truth. Rows come out in spec, method, budget order.
std::vector<BenchRow> run_benchmark(const std::vector<GenSpec>& specs, const BenchOptions& options);

}  // namespace sgs

#endif  // SGS_NETGEN_HPP
