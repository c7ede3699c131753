#include "sgs/netgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "sgs/errors.hpp"
#include "sgs/junction_tree.hpp"
#include "sgs/numeric.hpp"

namespace sgs {

namespace {

constexpr std::uint64_t kPilotSeed = 0x7069'6c6f'7473'6565ULL;
constexpr int kPilotGraphs = 20;
constexpr int kBisectionSteps = 40;

int random_count(double expected, Rng& rng) {
  const double whole = std::floor(expected);
  return static_cast<int>(whole) + (uniform01(rng) < expected - whole ? 1 : 0);
}

int random_index(int bound, Rng& rng) {
  return std::min(bound - 1, static_cast<int>(uniform01(rng) * bound));
}

void erdos_renyi_block(int first, int last, double p, Rng& rng, std::vector<Edge>& out) {
  for (int i = first; i < last; ++i)
    for (int j = i + 1; j < last; ++j)
      if (uniform01(rng) < p) out.emplace_back(i, j);
}

std::vector<Edge> barabasi_albert(int n, double m, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<double> weight(n, 1.0);  // degree + 1
  for (int v = 1; v < n; ++v) {
    const int k = std::min(v, random_count(m, rng));
    std::vector<int> targets;
    std::vector<double> w(weight.begin(), weight.begin() + v);
    for (int t = 0; t < k; ++t) {
      double total = 0;
      for (double x : w) total += x;
      double u = uniform01(rng) * total;
      int pick = 0;
      for (; pick < v - 1; ++pick) {
        if (u < w[pick]) break;
        u -= w[pick];
      }
      while (w[pick] == 0.0) pick = (pick + 1) % v;
      targets.push_back(pick);
      w[pick] = 0.0;
    }
    std::sort(targets.begin(), targets.end());
    for (int t : targets) {
      edges.emplace_back(t, v);
      weight[t] += 1.0;
      weight[v] += 1.0;
    }
  }
  return edges;
}

std::vector<Edge> watts_strogatz(int n, double k, double rewire, Rng& rng) {
  std::set<std::pair<int, int>> ring;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (int i = 0; i < n; ++i) {
    const int reach = std::min(random_count(k, rng), (n - 1) / 2);
    for (int d = 1; d <= reach; ++d) ring.insert(key(i, (i + d) % n));
  }
  std::vector<std::pair<int, int>> lattice(ring.begin(), ring.end());
  std::set<std::pair<int, int>> out(ring.begin(), ring.end());
  for (auto [a, b] : lattice) {
    if (uniform01(rng) >= rewire) continue;
    const int target = random_index(n, rng);
    if (target == a || out.count(key(a, target))) continue;
    out.erase(key(a, b));
    out.insert(key(a, target));
  }
  return {out.begin(), out.end()};
}

std::vector<Edge> island_edges(const GenSpec& spec, double p, Rng& rng) {
  std::vector<int> bounds(spec.islands + 1);
  for (int b = 0; b <= spec.islands; ++b) bounds[b] = static_cast<int>(static_cast<long long>(spec.n) * b / spec.islands);
  std::vector<Edge> edges;
  for (int b = 0; b < spec.islands; ++b) erdos_renyi_block(bounds[b], bounds[b + 1], p, rng, edges);
  for (int b = 0; b + 1 < spec.islands; ++b) {
    if (bounds[b + 1] == bounds[b] || bounds[b + 2] == bounds[b + 1]) continue;
    const int from = bounds[b] + random_index(bounds[b + 1] - bounds[b], rng);
    const int to = bounds[b + 1] + random_index(bounds[b + 2] - bounds[b + 1], rng);
    edges.emplace_back(from, to);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

Dag build(const GenSpec& spec, double density, Rng& rng) {
  std::vector<Edge> edges;
  switch (spec.family) {
    case GraphFamily::erdos_renyi:
      erdos_renyi_block(0, spec.n, density, rng, edges);
      break;
    case GraphFamily::er_islands:
      edges = island_edges(spec, density, rng);
      break;
    case GraphFamily::barabasi_albert:
      edges = barabasi_albert(spec.n, density, rng);
      break;
    case GraphFamily::watts_strogatz:
      edges = watts_strogatz(spec.n, density, spec.rewire_prob, rng);
      break;
  }
  return Dag(spec.n, edges);
}

double max_density(const GenSpec& spec) {
  switch (spec.family) {
    case GraphFamily::erdos_renyi:
    case GraphFamily::er_islands:
      return 1.0;
    case GraphFamily::barabasi_albert:
      return spec.n - 1.0;
    case GraphFamily::watts_strogatz:
      return (spec.n - 1) / 2.0;
  }
  return 1.0;
}

double pilot_mean(const GenSpec& spec, double density) {
  double total = 0;
  for (int i = 0; i < kPilotGraphs; ++i) {
    Rng rng(mix_seed(kPilotSeed, static_cast<std::uint64_t>(i)));
    total += mean_markov_blanket_size(build(spec, density, rng));
  }
  return total / kPilotGraphs;
}

}  // namespace

std::string_view to_string(GraphFamily f) noexcept {
  switch (f) {
    case GraphFamily::erdos_renyi: return "er";
    case GraphFamily::barabasi_albert: return "ba";
    case GraphFamily::watts_strogatz: return "ws";
    case GraphFamily::er_islands: return "islands";
  }
  return "unknown";
}

std::optional<GraphFamily> parse_family(std::string_view text) noexcept {
  for (GraphFamily f : {GraphFamily::erdos_renyi, GraphFamily::barabasi_albert, GraphFamily::watts_strogatz,
                        GraphFamily::er_islands})
    if (to_string(f) == text) return f;
  return std::nullopt;
}

void check_spec(const GenSpec& spec) {
  if (spec.n < 2) throw ArgumentError("n must be at least 2");
  if (spec.categories < 2) throw ArgumentError("categories must be at least 2");
  if (!(spec.evidence_fraction >= 0.0 && spec.evidence_fraction <= 1.0))
    throw ArgumentError("evidence fraction must lie in [0, 1]");
  if (!(spec.avg_mb_size > 0.0)) throw ArgumentError("average Markov blanket size must be positive");
  if (spec.islands < 1) throw ArgumentError("islands must be at least 1");
  if (!(spec.rewire_prob >= 0.0 && spec.rewire_prob <= 1.0)) throw ArgumentError("rewire_prob must lie in [0, 1]");
  if (spec.density && !(*spec.density >= 0.0 && *spec.density <= max_density(spec)))
    throw ArgumentError("density outside the family's range");
}

double mean_markov_blanket_size(const Dag& dag) {
  if (dag.size() == 0) return 0.0;
  double total = 0;
  for (NodeId v = 0; v < dag.size(); ++v) total += static_cast<double>(markov_blanket(dag, v).size());
  return total / dag.size();
}

double calibrate_density(const GenSpec& spec) {
  check_spec(spec);
  double lo = 0.0, hi = max_density(spec);
  const double reach = pilot_mean(spec, hi);
  if (reach < spec.avg_mb_size)
    throw ArgumentError("average Markov blanket size " + std::to_string(spec.avg_mb_size) + " is unreachable for " +
                        std::string(to_string(spec.family)) + " with n = " + std::to_string(spec.n) +
                        " (maximum " + std::to_string(reach) + ")");
  for (int step = 0; step < kBisectionSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (pilot_mean(spec, mid) < spec.avg_mb_size) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Dag gen_dag(const GenSpec& spec) {
  check_spec(spec);
  const double density = spec.density ? *spec.density : calibrate_density(spec);
  Rng rng(mix_seed(spec.seed, 1));
  return build(spec, density, rng);
}

Network gen_cpts(const Dag& dag, int categories, std::uint64_t seed) {
  if (categories < 2) throw ArgumentError("categories must be at least 2");
  Rng rng(seed);
  std::vector<std::vector<double>> cpts(dag.size());
  for (NodeId v = 0; v < dag.size(); ++v) {
    std::size_t rows = 1;
    for (std::size_t i = 0; i < dag.parents(v).size(); ++i) rows *= categories;
    cpts[v].resize(rows * categories);
    for (std::size_t r = 0; r < rows; ++r) {
      double total = 0;
      for (int s = 0; s < categories; ++s) total += cpts[v][r * categories + s] = uniform01(rng);
      for (int s = 0; s < categories; ++s) cpts[v][r * categories + s] /= total;
    }
  }
  return Network(dag, std::vector<int>(dag.size(), categories), std::move(cpts));
}

Network gen_network(const GenSpec& spec) { return gen_cpts(gen_dag(spec), spec.categories, mix_seed(spec.seed, 2)); }

Evidence pick_evidence(const Network& bn, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ArgumentError("evidence fraction must lie in [0, 1]");
  const int k = std::min(bn.size(), static_cast<int>(std::floor(fraction * bn.size() + 1e-9)));
  Rng rng(mix_seed(seed, 0));
  std::vector<NodeId> ids(bn.size());
  for (int i = 0; i < bn.size(); ++i) ids[i] = i;
  for (int i = 0; i < k; ++i) std::swap(ids[i], ids[i + random_index(bn.size() - i, rng)]);
  Evidence e;
  if (k == 0) return e;
  const FullAssignment x = sample_forward(bn, 1, mix_seed(seed, 1)).front();
  for (int i = 0; i < k; ++i) e[ids[i]] = x[ids[i]];
  return e;
}

double nrmse(double truth, const std::vector<double>& estimates) {
  if (!(truth > 0.0)) throw DomainError("NRMSE needs a positive true value");
  if (estimates.empty()) throw ArgumentError("NRMSE needs at least one estimate");
  double sq = 0;
  for (double x : estimates) sq += (truth - x) * (truth - x);
  return std::sqrt(sq / static_cast<double>(estimates.size())) / truth;
}

std::vector<BenchRow> run_benchmark(const std::vector<GenSpec>& specs, const BenchOptions& options) {
  if (options.repetitions < 1) throw ArgumentError("repetitions must be at least 1");
  if (options.budgets.empty() || options.methods.empty()) throw ArgumentError("need at least one method and budget");
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const GenSpec& spec = specs[i];
    const Network bn = gen_network(spec);
    const Evidence e = pick_evidence(bn, spec.evidence_fraction, mix_seed(spec.seed, 3));
    double truth = 0;
    try {
      truth = std::exp(log_exact_marginal(bn, e, options.base.junction_tree));
    } catch (const CapacityError& err) {
      throw CapacityError("spec " + std::to_string(i) + ": junction-tree ground truth infeasible: " + err.what());
    }
    for (Method method : options.methods)
      for (std::size_t budget : options.budgets) {
        SgsConfig cfg = options.base;
        cfg.sampler.samples = budget;
        std::vector<double> estimates;
        double elapsed = 0;
        for (int r = 0; r < options.repetitions; ++r) {
          cfg.sampler.seed = mix_seed(mix_seed(spec.seed, 4), static_cast<std::uint64_t>(r));
          const auto start = std::chrono::steady_clock::now();
          estimates.push_back(marginal(bn, e, method, cfg).value());
          elapsed += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        BenchRow row;
        row.family = std::string(to_string(spec.family));
        row.n = spec.n;
        row.categories = spec.categories;
        row.evidence_fraction = spec.evidence_fraction;
        row.avg_mb_size = spec.avg_mb_size;
        row.method = std::string(to_string(method));
        row.budget = budget;
        row.wall_time_ms = elapsed / options.repetitions;
        row.nrmse = nrmse(truth, estimates);
        row.repetitions = options.repetitions;
        rows.push_back(std::move(row));
      }
  }
  return rows;
}

}  // namespace sgs
