#ifndef SGS_NETWORK_HPP
#define SGS_NETWORK_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgs/graph.hpp"

namespace sgs {

/// Observed subset of variables: node -> state index.
using Evidence = std::map<NodeId, int>;

/// One state index per node of a network.
using FullAssignment = std::vector<int>;

/// Categorical Bayesian network: a DAG plus one conditional probability
/// table per node.
///
/// CPT layout: row r holds P(X_v = . | parents = config r), where the parent
/// configuration is a mixed-radix number over dag.parents(v) (ascending node
/// id), the last parent being least significant. Entry (r, s) lives at
/// cpt(v)[r * cardinality(v) + s].
///
/// The constructor checks shapes only; value-level defects (rows that do not
/// sum to one, negative entries, cardinality below two) are reported by
/// validate().
class Network {
 public:
  Network() = default;
  Network(Dag dag, std::vector<int> cardinalities, std::vector<std::vector<double>> cpts,
          std::vector<std::string> names = {}, std::vector<std::vector<std::string>> state_names = {});

  int size() const noexcept { return dag_.size(); }
  const Dag& dag() const noexcept { return dag_; }
  const NodeSet& parents(NodeId v) const { return dag_.parents(v); }
  const NodeSet& children(NodeId v) const { return dag_.children(v); }

  int cardinality(NodeId v) const { return cardinalities_.at(v); }
  const std::vector<int>& cardinalities() const noexcept { return cardinalities_; }
  std::span<const double> cpt(NodeId v) const { return cpts_.at(v); }
  std::size_t row_count(NodeId v) const { return cpts_.at(v).size() / cardinalities_.at(v); }

  const std::string& name(NodeId v) const { return names_.at(v); }
  const std::vector<std::string>& state_names(NodeId v) const { return state_names_.at(v); }
  std::optional<NodeId> find(std::string_view name) const;
  std::optional<int> find_state(NodeId v, std::string_view state) const;

  /// Row index of v's parent configuration read from `states` (indexed by
  /// node id; only parent entries are consulted).
  std::size_t row_index(NodeId v, std::span<const int> states) const;

  /// P(X_v = states[v] | parents as in states).
  double probability(NodeId v, std::span<const int> states) const {
    return cpts_[v][row_index(v, states) * cardinalities_[v] + states[v]];
  }
  double log_probability(NodeId v, std::span<const int> states) const;

  /// Network restricted to `keep` (node keep[i] becomes node i). Every
  /// parent of a kept node must itself be kept.
  Network induced(const NodeSet& keep) const;

 private:
  Dag dag_;
  std::vector<int> cardinalities_;
  std::vector<std::vector<double>> cpts_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> state_names_;
};

struct Violation {
  NodeId node = -1;
  long row = -1;       // -1 for node-level defects
  std::string defect;  // "cardinality", "range", "row-normalization"
  std::string message;
};

/// Empty iff every value-level invariant holds.
std::vector<Violation> validate(const Network& bn, double row_tolerance = 1e-9);

/// Throws ArgumentError / IdentifierError on out-of-range nodes or states.
void check_evidence(const Network& bn, const Evidence& e);
NodeSet evidence_nodes(const Evidence& e);

double log_joint_probability(const Network& bn, std::span<const int> x);
double joint_probability(const Network& bn, std::span<const int> x);

struct EnumerationLimits {
  /// Sum of log2(cardinality) over the summed-out variables.
  double max_binary_equivalent = 22.0;
};

/// Ground truth log P(X_e) by summing the joint over every configuration of
/// the unobserved variables.
double log_enumerate_marginal(const Network& bn, const Evidence& e, EnumerationLimits limits = {});
double enumerate_marginal(const Network& bn, const Evidence& e, EnumerationLimits limits = {});

/// Ancestral samples, deterministic in `seed`.
std::vector<FullAssignment> sample_forward(const Network& bn, std::size_t count, std::uint64_t seed);

}  // namespace sgs

#endif  // SGS_NETWORK_HPP
