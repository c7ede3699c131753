#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sgs/decomposition.hpp"
#include "sgs/engine.hpp"
#include "sgs/errors.hpp"

using namespace sgs;

namespace {

SgsConfig all_exact() {
  SgsConfig cfg;
  cfg.n_max = kUnlimitedSubsetSize;
  return cfg;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : {Method::sgs, Method::jt_full, Method::lbp_is, Method::gs, Method::enumeration})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_FALSE(parse_method("bogus").has_value());
}

TEST_CASE("evidence-only factor") {
  const Network rx = fixture::binary_network({"R", "X"}, {{"R", "X"}});
  CHECK(evidence_only_factor(rx, {}, {{0, 1}}) == 0.0);
  CHECK(evidence_only_factor(rx, {0}, {{0, 1}}) == doctest::Approx(std::log(rx.cpt(0)[1])));
  CHECK_THROWS_AS(evidence_only_factor(rx, {1}, {{1, 1}}), ConsistencyError);

  // P(X_e) over the enumerated sum with the CPTs of e' left out.
  std::mt19937_64 rng(61);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Network bn = oracle::random_network(10, 0.3, 3, rng);
    const Evidence e = oracle::random_evidence(bn, 0.5, rng);
    const SubsetDecomposition d = decompose(bn, e);
    if (d.leftover_evidence.empty()) continue;
    const NodeSet ev = evidence_nodes(e);
    const NodeSet free = set_difference(d.relevant_nodes, ev);
    const NodeSet factors = set_difference(d.relevant_nodes, d.leftover_evidence);
    const double expected = log_enumerate_marginal(bn, e) - oracle::log_factor_sum(bn, free, factors, e);
    CHECK(evidence_only_factor(bn, d.leftover_evidence, e) == doctest::Approx(expected).epsilon(1e-10));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("degenerate evidence sets") {
  std::mt19937_64 rng(62);
  const Network bn = oracle::random_network(9, 0.3, 3, rng);
  for (Method m : {Method::sgs, Method::jt_full, Method::lbp_is, Method::gs}) CHECK(marginal(bn, {}, m).value() == 1.0);
  // Enumeration sums the raw joint, so only rounding separates it from one.
  CHECK(marginal(bn, {}, Method::enumeration).value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(marginal_sgs(bn, {}).per_subset.empty());

  Evidence all;
  std::vector<int> x(bn.size());
  for (int v = 0; v < bn.size(); ++v) all[v] = x[v] = (v * 5) % bn.cardinality(v);
  CHECK(marginal_sgs(bn, all).value() == doctest::Approx(joint_probability(bn, x)).epsilon(1e-12));

  CHECK_THROWS_AS(marginal_sgs(bn, {{0, 9}}), ArgumentError);
}

TEST_CASE("all-exact decomposition equals enumeration") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const Network bn = oracle::random_network(n, 0.2, 2, rng);
    const Evidence e = oracle::random_evidence(bn, std::uniform_real_distribution<double>(0.05, 0.8)(rng), rng);
    const MarginalEstimate r = marginal_sgs(bn, e, all_exact());
    const double exact = log_enumerate_marginal(bn, e);
    CHECK(std::abs(std::expm1(r.log_value - exact)) < 1e-10);

    double sum = r.leftover_log_factor;
    for (const auto& f : r.per_subset) {
      CHECK(f.method == SubsetMethod::exact);
      sum += f.log_factor;
    }
    CHECK(sum == doctest::Approx(r.log_value).epsilon(1e-14));
  }
}

TEST_CASE("cross-method agreement") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 30; ++trial) {
    const Network bn = oracle::random_network(15, 0.2, 3, rng);
    const Evidence e = oracle::random_evidence(bn, 0.3, rng);
    const double jt = marginal(bn, e, Method::jt_full).log_value;
    CHECK(std::abs(std::expm1(marginal(bn, e, Method::enumeration).log_value - jt)) < 1e-10);
    CHECK(std::abs(std::expm1(marginal(bn, e, Method::sgs, all_exact()).log_value - jt)) < 1e-10);
  }
}

TEST_CASE("size threshold routes subsets") {
  const Network fig = fixture::figure_network();
  const Evidence e{{*fig.find("E"), 0}, {*fig.find("N"), 1}, {*fig.find("O"), 0}};
  SgsConfig cfg;
  cfg.n_max = 3;
  const MarginalEstimate r = marginal_sgs(fig, e, cfg);
  REQUIRE(r.per_subset.size() == 2);
  CHECK(r.per_subset[0].method == SubsetMethod::exact);
  CHECK(r.per_subset[1].method == SubsetMethod::approx);
  CHECK(r.per_subset[1].samples == cfg.sampler.samples);
  CHECK(r.sampled_variables == 4);

  cfg.method_override[0] = SubsetMethod::approx;
  cfg.method_override[1] = SubsetMethod::exact;
  const MarginalEstimate o = marginal_sgs(fig, e, cfg);
  CHECK(o.per_subset[0].method == SubsetMethod::approx);
  CHECK(o.per_subset[1].method == SubsetMethod::exact);

  SgsConfig tiny;
  tiny.n_max = kUnlimitedSubsetSize;
  tiny.junction_tree.table_cap = 2;
  const MarginalEstimate f = marginal_sgs(fig, e, tiny);
  CHECK(f.per_subset[1].fell_back);
  CHECK(f.per_subset[1].method == SubsetMethod::approx);

  SgsConfig bad;
  bad.n_max = -1;
  CHECK_THROWS_AS(marginal_sgs(fig, e, bad), ArgumentError);
}

TEST_CASE("mixed exact and sampled subsets stay unbiased") {
  const Network fig = fixture::figure_network();
  const Evidence e{{*fig.find("E"), 1}, {*fig.find("N"), 0}, {*fig.find("O"), 1}};
  const double exact = enumerate_marginal(fig, e);
  SgsConfig cfg;
  cfg.n_max = 3;
  cfg.sampler.samples = 30;
  const int reps = 200;
  double mean = 0, sq = 0;
  for (int r = 0; r < reps; ++r) {
    cfg.sampler.seed = mix_seed(4242, r);
    const double v = marginal_sgs(fig, e, cfg).value();
    mean += v;
    sq += v * v;
  }
  mean /= reps;
  const double var = (sq / reps - mean * mean) * reps / (reps - 1);
  CHECK(std::abs(mean - exact) < 4 * std::sqrt(var / reps) + 1e-15);
}

TEST_CASE("decomposed estimates are deterministic") {
  std::mt19937_64 rng(65);
  const Network bn = oracle::random_network(30, 0.12, 2, rng);
  const Evidence e = oracle::random_evidence(bn, 0.3, rng);
  SgsConfig cfg;
  cfg.n_max = 2;
  cfg.sampler.seed = 11;
  CHECK(marginal_sgs(bn, e, cfg).log_value == marginal_sgs(bn, e, cfg).log_value);
}
