#ifndef SGS_SAMPLING_HPP
#define SGS_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sgs/decomposition.hpp"
#include "sgs/graph.hpp"
#include "sgs/network.hpp"

namespace sgs {

struct SamplerConfig {
  std::size_t samples = 1000;  // M
  int lbp_iterations = 10;
  double lbp_tolerance = 1e-6;
  std::uint64_t seed = 1;
  double belief_floor = 1e-6;
  int burn_in = 100;  // Gibbs sweeps discarded before counting
};

/// Throws ArgumentError unless M >= 1, iterations >= 1, floor in (0, 0.1)
/// and burn_in >= 0.
void check_config(const SamplerConfig& cfg);

/// Fully factorized proposal Q(X) = prod_v q_v(X_v).
struct ImportanceDistribution {
  NodeSet nodes;
  std::vector<std::vector<double>> beliefs;  // parallel to nodes
  int iterations = 0;
  bool converged = false;

  std::span<const double> belief(NodeId v) const;
};

struct ImportanceResult {
  double log_estimate = 0.0;
  /// Sample variance of w_m / mean(w): the squared coefficient of variation
  /// of the weights, which stays finite when the weights underflow.
  double relative_weight_variance = 0.0;
  std::size_t samples = 0;
};

/// Sum-product loopy BP on the factor graph whose variables are `free` and
/// whose factors are the CPTs of `factor_nodes` with evidence clamped.
/// Messages start at one and are updated synchronously until the beliefs
/// move less than cfg.lbp_tolerance or cfg.lbp_iterations is reached.
/// Beliefs are floored at cfg.belief_floor and renormalized.
ImportanceDistribution loopy_bp(const Network& bn, const NodeSet& free, const NodeSet& factor_nodes,
                                const Evidence& e, const SamplerConfig& cfg);

/// Per-subset form: factors are the CPTs of subset ∪ e_ch.
ImportanceDistribution loopy_bp(const Network& bn, const NodeSet& subset, const SubsetBoundary& boundary,
                                const Evidence& e, const SamplerConfig& cfg);

/// Unbiased estimate of sum_{X_free} prod_{v in factor_nodes} P(X_v | X_pa(v))
/// with `samples` draws from q; weights are formed in log space.
ImportanceResult importance_sample(const Network& bn, const NodeSet& free, const NodeSet& factor_nodes,
                                   const Evidence& e, const ImportanceDistribution& q, std::size_t samples,
                                   std::uint64_t seed);

/// Estimate of P(X_ech | X_{emb \ ech}) for one subset.
ImportanceResult importance_estimate(const Network& bn, const NodeSet& subset, const SubsetBoundary& boundary,
                                     const Evidence& e, const ImportanceDistribution& q, const SamplerConfig& cfg);

/// Gibbs baseline: single-site Gibbs over the unobserved relevant nodes,
/// empirical state frequencies as a factorized proposal, then importance
/// weighting of P(X_e) with fresh draws. The M samples are split between
/// the chain (ceil(M/2) sweeps after burn-in) and the weighted draws.
ImportanceResult gibbs_estimate(const Network& bn, const Evidence& e, const SamplerConfig& cfg);

/// LBP-IS baseline: one loopy BP over the whole relevant subgraph and one
/// importance sampler over all its unobserved nodes.
ImportanceResult lbp_is_estimate(const Network& bn, const Evidence& e, const SamplerConfig& cfg);

}  // namespace sgs

#endif  // SGS_SAMPLING_HPP
