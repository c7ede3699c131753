#include "sgs/engine.hpp"

#include <cmath>

#include "sgs/decomposition.hpp"
#include "sgs/errors.hpp"
#include "sgs/numeric.hpp"

namespace sgs {

std::string_view to_string(SubsetMethod m) noexcept { return m == SubsetMethod::exact ? "exact" : "approx"; }

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::sgs: return "sgs";
    case Method::jt_full: return "jt";
    case Method::lbp_is: return "lbp-is";
    case Method::gs: return "gs";
    case Method::enumeration: return "enum";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  for (Method m : {Method::sgs, Method::jt_full, Method::lbp_is, Method::gs, Method::enumeration})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

double MarginalEstimate::value() const { return std::exp(log_value); }

double evidence_only_factor(const Network& bn, const NodeSet& leftover, const Evidence& e) {
  std::vector<int> states(bn.size(), 0);
  for (const auto& [v, s] : e) states[v] = s;
  double total = 0.0;
  for (NodeId v : leftover) {
    if (!e.count(v)) throw ConsistencyError("leftover node " + bn.name(v) + " is not observed");
    for (NodeId p : bn.parents(v))
      if (!e.count(p))
        throw ConsistencyError("leftover node " + bn.name(v) + " has unobserved parent " + bn.name(p));
    total += bn.log_probability(v, states);
  }
  return total;
}

MarginalEstimate marginal_sgs(const Network& bn, const Evidence& e, const SgsConfig& cfg) {
  check_config(cfg.sampler);
  if (cfg.n_max < 0) throw ArgumentError("n_max must be non-negative");
  const SubsetDecomposition d = decompose(bn, e);

  MarginalEstimate out;
  out.method = Method::sgs;
  out.samples = cfg.sampler.samples;
  out.leftover_log_factor = evidence_only_factor(bn, d.leftover_evidence, e);
  out.log_value = out.leftover_log_factor;

  for (std::size_t k = 0; k < d.subsets.size(); ++k) {
    const NodeSet& subset = d.subsets[k];
    const SubsetBoundary& boundary = d.boundaries[k];
    SubsetFactor f;
    f.subset = subset;
    f.method = static_cast<int>(subset.size()) < cfg.n_max ? SubsetMethod::exact : SubsetMethod::approx;
    if (auto it = cfg.method_override.find(k); it != cfg.method_override.end()) f.method = it->second;

    if (f.method == SubsetMethod::exact) {
      try {
        f.log_factor = log_subset_marginal_exact(bn, subset, boundary, e, cfg.junction_tree);
      } catch (const CapacityError&) {
        f.method = SubsetMethod::approx;
        f.fell_back = true;
      }
    }
    if (f.method == SubsetMethod::approx) {
      SamplerConfig sub = cfg.sampler;
      sub.seed = mix_seed(cfg.sampler.seed, k);
      const ImportanceDistribution q = loopy_bp(bn, subset, boundary, e, sub);
      const ImportanceResult r = importance_estimate(bn, subset, boundary, e, q, sub);
      f.log_factor = r.log_estimate;
      f.samples = r.samples;
      f.relative_weight_variance = r.relative_weight_variance;
      out.sampled_variables += subset.size();
    }
    out.log_value += f.log_factor;
    out.per_subset.push_back(std::move(f));
  }
  return out;
}

MarginalEstimate marginal(const Network& bn, const Evidence& e, Method method, const SgsConfig& cfg) {
  if (method == Method::sgs) return marginal_sgs(bn, e, cfg);

  check_config(cfg.sampler);
  MarginalEstimate out;
  out.method = method;
  switch (method) {
    case Method::jt_full:
      out.log_value = log_exact_marginal(bn, e, cfg.junction_tree);
      break;
    case Method::enumeration:
      out.log_value = log_enumerate_marginal(bn, e);
      break;
    case Method::lbp_is:
    case Method::gs: {
      const ImportanceResult r =
          method == Method::lbp_is ? lbp_is_estimate(bn, e, cfg.sampler) : gibbs_estimate(bn, e, cfg.sampler);
      out.log_value = r.log_estimate;
      out.samples = r.samples;
      out.relative_weight_variance = r.relative_weight_variance;
      if (r.samples > 0)
        out.sampled_variables =
            set_difference(relevant_nodes(bn.dag(), evidence_nodes(e)), evidence_nodes(e)).size();
      break;
    }
    case Method::sgs:
      break;
  }
  return out;
}

}  // namespace sgs
