#ifndef SGS_ENGINE_HPP
#define SGS_ENGINE_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgs/junction_tree.hpp"
#include "sgs/network.hpp"
#include "sgs/sampling.hpp"

namespace sgs {

enum class SubsetMethod { exact, approx };

/// Inference routes behind marginal(): the decomposed estimator, its
/// undecomposed baselines, and the enumeration oracle.
enum class Method { sgs, jt_full, lbp_is, gs, enumeration };

std::string_view to_string(SubsetMethod m) noexcept;
std::string_view to_string(Method m) noexcept;
/// Accepts the CLI spellings: sgs, jt, lbp-is, gs, enum.
std::optional<Method> parse_method(std::string_view text) noexcept;

inline constexpr int kUnlimitedSubsetSize = std::numeric_limits<int>::max();

struct SgsConfig {
  /// Subsets with fewer than n_max nodes are solved exactly.
  int n_max = 15;
  SamplerConfig sampler;
  JunctionTreeOptions junction_tree;
  /// Forces a method for the subset with the given index.
  std::map<std::size_t, SubsetMethod> method_override;
};

struct SubsetFactor {
  NodeSet subset;
  SubsetMethod method = SubsetMethod::exact;
  double log_factor = 0.0;
  std::size_t samples = 0;
  double relative_weight_variance = 0.0;
  /// Exact inference was requested but the clique tables exceeded the cap.
  bool fell_back = false;
};

struct MarginalEstimate {
  Method method = Method::sgs;
  double log_value = 0.0;
  double leftover_log_factor = 0.0;
  std::vector<SubsetFactor> per_subset;
  /// Variables drawn by importance sampling per sample.
  std::size_t sampled_variables = 0;
  std::size_t samples = 0;
  double relative_weight_variance = 0.0;

  double value() const;
};

/// Sum over e' of log P(X_v = e[v] | X_pa(v) = e[pa(v)]); every parent of a
/// node in e' must be observed.
double evidence_only_factor(const Network& bn, const NodeSet& leftover, const Evidence& e);

/// Decompose, solve each subset exactly (junction tree) or approximately
/// (loopy BP + importance sampling), and multiply in the leftover factor.
/// Subset k samples with seed mix_seed(cfg.sampler.seed, k).
MarginalEstimate marginal_sgs(const Network& bn, const Evidence& e, const SgsConfig& cfg = {});

MarginalEstimate marginal(const Network& bn, const Evidence& e, Method method, const SgsConfig& cfg = {});

}  // namespace sgs

#endif  // SGS_ENGINE_HPP
