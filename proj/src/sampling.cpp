#include "sgs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgs/errors.hpp"
#include "sgs/numeric.hpp"
#include "table_index.hpp"

namespace sgs {

void check_config(const SamplerConfig& cfg) {
  if (cfg.samples < 1) throw ArgumentError("sample count must be at least 1");
  if (cfg.lbp_iterations < 1) throw ArgumentError("LBP needs at least one iteration");
  if (!(cfg.belief_floor > 0.0 && cfg.belief_floor < 0.1)) throw ArgumentError("belief floor must lie in (0, 0.1)");
  if (cfg.burn_in < 0) throw ArgumentError("burn-in must be non-negative");
}

std::span<const double> ImportanceDistribution::belief(NodeId v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  if (it == nodes.end() || *it != v) throw ArgumentError("proposal does not cover node " + std::to_string(v));
  return beliefs[static_cast<std::size_t>(it - nodes.begin())];
}

namespace {

// Normalize in place; a zero or non-finite vector becomes uniform.
void normalize(std::vector<double>& p) {
  double total = 0.0;
  for (double x : p) total += x;
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return;
  }
  for (double& x : p) x /= total;
}

void floor_and_normalize(std::vector<double>& p, double floor) {
  normalize(p);
  for (double& x : p) x = std::max(x, floor);
  normalize(p);
}

std::vector<int> with_evidence(const Network& bn, const Evidence& e) {
  std::vector<int> states(bn.size(), 0);
  for (const auto& [v, s] : e) states[v] = s;
  return states;
}

// A CPT with its observed axes clamped: a table over the free family members.
struct ReducedFactor {
  NodeSet scope;  // free variables, ascending
  std::vector<int> cards;
  std::vector<double> table;
};

ReducedFactor reduce_cpt(const Network& bn, NodeId v, const std::vector<bool>& is_free, std::vector<int>& states) {
  ReducedFactor f;
  for (NodeId u : set_union(bn.parents(v), {v}))
    if (is_free[u]) {
      f.scope.push_back(u);
      f.cards.push_back(bn.cardinality(u));
    }
  f.table.resize(detail::table_size(f.cards));
  std::vector<int> counter(f.scope.size(), 0);
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    for (std::size_t k = 0; k < f.scope.size(); ++k) states[f.scope[k]] = counter[k];
    f.table[i] = bn.probability(v, states);
    for (std::size_t k = f.scope.size(); k-- > 0;) {
      if (++counter[k] < f.cards[k]) break;
      counter[k] = 0;
    }
  }
  return f;
}

void check_subproblem(const Network& bn, const NodeSet& free, const NodeSet& factor_nodes, const Evidence& e) {
  check_evidence(bn, e);
  for (NodeId v : free) {
    if (!bn.dag().contains(v)) throw IdentifierError("unknown node id " + std::to_string(v));
    if (e.count(v)) throw ArgumentError("node " + bn.name(v) + " is both free and observed");
  }
  for (NodeId v : factor_nodes) {
    if (!bn.dag().contains(v)) throw IdentifierError("unknown node id " + std::to_string(v));
    for (NodeId u : set_union(bn.parents(v), {v}))
      if (!set_contains(free, u) && !e.count(u))
        throw ArgumentError("factor of " + bn.name(v) + " touches node " + bn.name(u) + " that is neither free nor observed");
  }
}

}  // namespace

ImportanceDistribution loopy_bp(const Network& bn, const NodeSet& free, const NodeSet& factor_nodes,
                                const Evidence& e, const SamplerConfig& cfg) {
  check_config(cfg);
  check_subproblem(bn, free, factor_nodes, e);

  std::vector<bool> is_free(bn.size(), false);
  for (NodeId v : free) is_free[v] = true;
  std::vector<int> states = with_evidence(bn, e);

  std::vector<ReducedFactor> factors;
  for (NodeId v : factor_nodes) {
    ReducedFactor f = reduce_cpt(bn, v, is_free, states);
    if (!f.scope.empty()) factors.push_back(std::move(f));
  }

  auto local = [&](NodeId v) { return static_cast<std::size_t>(std::lower_bound(free.begin(), free.end(), v) - free.begin()); };

  // Edge list of the bipartite factor graph: (factor, slot in its scope).
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> var_edges(free.size());
  for (std::size_t a = 0; a < factors.size(); ++a)
    for (std::size_t k = 0; k < factors[a].scope.size(); ++k) var_edges[local(factors[a].scope[k])].emplace_back(a, k);

  std::vector<std::vector<std::vector<double>>> to_var(factors.size()), to_factor(factors.size());
  for (std::size_t a = 0; a < factors.size(); ++a)
    for (int c : factors[a].cards) {
      to_var[a].emplace_back(c, 1.0);
      to_factor[a].emplace_back(c, 1.0);
    }

  ImportanceDistribution q;
  q.nodes = free;
  q.beliefs.resize(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) q.beliefs[i].assign(bn.cardinality(free[i]), 1.0 / bn.cardinality(free[i]));

  for (int iter = 1; iter <= cfg.lbp_iterations; ++iter) {
    // Variable -> factor: product of the other factors' previous messages.
    for (std::size_t i = 0; i < free.size(); ++i)
      for (const auto& [a, k] : var_edges[i]) {
        std::vector<double> m(bn.cardinality(free[i]), 1.0);
        for (const auto& [b, j] : var_edges[i]) {
          if (b == a && j == k) continue;
          for (std::size_t s = 0; s < m.size(); ++s) m[s] *= to_var[b][j][s];
        }
        normalize(m);
        to_factor[a][k] = std::move(m);
      }

    // Factor -> variable: sum over the other scope variables.
    for (std::size_t a = 0; a < factors.size(); ++a) {
      const ReducedFactor& f = factors[a];
      const std::size_t width = f.scope.size();
      std::vector<std::vector<double>> out(width);
      for (std::size_t k = 0; k < width; ++k) out[k].assign(f.cards[k], 0.0);
      std::vector<int> counter(width, 0);
      for (std::size_t t = 0; t < f.table.size(); ++t) {
        for (std::size_t k = 0; k < width; ++k) {
          double p = f.table[t];
          for (std::size_t j = 0; j < width && p != 0.0; ++j)
            if (j != k) p *= to_factor[a][j][counter[j]];
          out[k][counter[k]] += p;
        }
        for (std::size_t k = width; k-- > 0;) {
          if (++counter[k] < f.cards[k]) break;
          counter[k] = 0;
        }
      }
      for (std::size_t k = 0; k < width; ++k) {
        normalize(out[k]);
        to_var[a][k] = std::move(out[k]);
      }
    }

    double change = 0.0;
    for (std::size_t i = 0; i < free.size(); ++i) {
      std::vector<double> b(bn.cardinality(free[i]), 1.0);
      for (const auto& [a, k] : var_edges[i])
        for (std::size_t s = 0; s < b.size(); ++s) b[s] *= to_var[a][k][s];
      normalize(b);
      for (std::size_t s = 0; s < b.size(); ++s) change = std::max(change, std::abs(b[s] - q.beliefs[i][s]));
      q.beliefs[i] = std::move(b);
    }
    q.iterations = iter;
    if (change < cfg.lbp_tolerance) {
      q.converged = true;
      break;
    }
  }

  for (auto& b : q.beliefs) floor_and_normalize(b, cfg.belief_floor);
  return q;
}

ImportanceDistribution loopy_bp(const Network& bn, const NodeSet& subset, const SubsetBoundary& boundary,
                                const Evidence& e, const SamplerConfig& cfg) {
  return loopy_bp(bn, subset, set_union(subset, boundary.children), e, cfg);
}

ImportanceResult importance_sample(const Network& bn, const NodeSet& free, const NodeSet& factor_nodes,
                                   const Evidence& e, const ImportanceDistribution& q, std::size_t samples,
                                   std::uint64_t seed) {
  if (samples < 1) throw ArgumentError("sample count must be at least 1");
  check_subproblem(bn, free, factor_nodes, e);
  std::vector<std::span<const double>> proposal;
  for (NodeId v : free) proposal.push_back(q.belief(v));

  std::vector<int> states = with_evidence(bn, e);
  Rng rng(seed);
  std::vector<double> log_weights(samples);
  LogSumExp total;
  for (std::size_t m = 0; m < samples; ++m) {
    double lw = 0.0;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const int s = sample_categorical(proposal[i], rng);
      states[free[i]] = s;
      lw -= std::log(proposal[i][s]);
    }
    for (NodeId v : factor_nodes) lw += bn.log_probability(v, states);
    log_weights[m] = lw;
    total.add(lw);
  }

  ImportanceResult r;
  r.samples = samples;
  r.log_estimate = total.value() - std::log(static_cast<double>(samples));
  if (samples > 1 && r.log_estimate != kNegInf) {
    double ss = 0.0;
    for (double lw : log_weights) {
      const double ratio = std::exp(lw - r.log_estimate) - 1.0;
      ss += ratio * ratio;
    }
    r.relative_weight_variance = ss / static_cast<double>(samples - 1);
  }
  return r;
}

ImportanceResult importance_estimate(const Network& bn, const NodeSet& subset, const SubsetBoundary& boundary,
                                     const Evidence& e, const ImportanceDistribution& q, const SamplerConfig& cfg) {
  check_config(cfg);
  return importance_sample(bn, subset, set_union(subset, boundary.children), e, q, cfg.samples, cfg.seed);
}

namespace {

struct RelevantProblem {
  NodeSet relevant;
  NodeSet free;
};

RelevantProblem relevant_problem(const Network& bn, const Evidence& e) {
  check_evidence(bn, e);
  RelevantProblem p;
  const NodeSet observed = evidence_nodes(e);
  p.relevant = relevant_nodes(bn.dag(), observed);
  p.free = set_difference(p.relevant, observed);
  return p;
}

ImportanceResult exact_when_nothing_free(const Network& bn, const RelevantProblem& p, const Evidence& e) {
  std::vector<int> states = with_evidence(bn, e);
  ImportanceResult r;
  for (NodeId v : p.relevant) r.log_estimate += bn.log_probability(v, states);
  return r;
}

}  // namespace

ImportanceResult lbp_is_estimate(const Network& bn, const Evidence& e, const SamplerConfig& cfg) {
  check_config(cfg);
  const RelevantProblem p = relevant_problem(bn, e);
  if (p.free.empty()) return exact_when_nothing_free(bn, p, e);
  const ImportanceDistribution q = loopy_bp(bn, p.free, p.relevant, e, cfg);
  return importance_sample(bn, p.free, p.relevant, e, q, cfg.samples, mix_seed(cfg.seed, 0));
}

ImportanceResult gibbs_estimate(const Network& bn, const Evidence& e, const SamplerConfig& cfg) {
  check_config(cfg);
  const RelevantProblem p = relevant_problem(bn, e);
  if (p.free.empty()) return exact_when_nothing_free(bn, p, e);

  std::vector<int> states = with_evidence(bn, e);
  std::vector<bool> is_relevant(bn.size(), false);
  for (NodeId v : p.relevant) is_relevant[v] = true;
  std::vector<bool> is_free(bn.size(), false);
  for (NodeId v : p.free) is_free[v] = true;

  Rng rng(mix_seed(cfg.seed, 1));
  // Initial state: ancestral draw with the evidence clamped.
  for (NodeId v : topological_order(bn.dag())) {
    if (!is_free[v]) continue;
    const int c = bn.cardinality(v);
    states[v] = sample_categorical(bn.cpt(v).subspan(bn.row_index(v, states) * c, c), rng);
  }

  std::vector<NodeSet> relevant_children(bn.size());
  for (NodeId v : p.free)
    for (NodeId c : bn.children(v))
      if (is_relevant[c]) relevant_children[v].push_back(c);

  std::vector<std::vector<double>> counts(p.free.size());
  for (std::size_t i = 0; i < p.free.size(); ++i) counts[i].assign(bn.cardinality(p.free[i]), 0.0);

  std::vector<double> conditional;
  // The budget M covers both stages: ceil(M/2) counted sweeps, floor(M/2)
  // weighted draws (at least one each).
  const std::size_t weighted = std::max<std::size_t>(1, cfg.samples / 2);
  const std::size_t counted = std::max<std::size_t>(1, cfg.samples - cfg.samples / 2);
  const std::size_t sweeps = static_cast<std::size_t>(cfg.burn_in) + counted;
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < p.free.size(); ++i) {
      const NodeId v = p.free[i];
      const int previous = states[v];
      conditional.assign(bn.cardinality(v), 0.0);
      double total = 0.0;
      for (int s = 0; s < bn.cardinality(v); ++s) {
        states[v] = s;
        double w = bn.probability(v, states);
        for (NodeId c : relevant_children[v]) w *= bn.probability(c, states);
        conditional[s] = w;
        total += w;
      }
      if (total > 0.0) {
        for (double& w : conditional) w /= total;
        states[v] = sample_categorical(conditional, rng);
      } else {
        // Zero-probability neighbourhood; stay put.
        states[v] = previous;
      }
      if (sweep >= static_cast<std::size_t>(cfg.burn_in)) counts[i][states[v]] += 1.0;
    }
  }

  ImportanceDistribution q;
  q.nodes = p.free;
  q.beliefs = std::move(counts);
  for (auto& b : q.beliefs) floor_and_normalize(b, cfg.belief_floor);
  return importance_sample(bn, p.free, p.relevant, e, q, weighted, mix_seed(cfg.seed, 2));
}

}  // namespace sgs
