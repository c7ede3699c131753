#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sgs/errors.hpp"
#include "sgs/network.hpp"

using namespace sgs;

namespace {

// A -> B, P(A=1) = 0.3, P(B=1 | A=1) = 0.8, P(B=1 | A=0) = 0.1.
Network two_node() {
  std::vector<Edge> e{{0, 1}};
  return Network(Dag(2, e), {2, 2}, {{0.7, 0.3}, {0.9, 0.1, 0.2, 0.8}}, {"A", "B"});
}

Network uniform_network(int n, int c, std::mt19937_64& rng) {
  Dag dag = oracle::random_dag(n, 0.4, rng);
  std::vector<std::vector<double>> cpts(n);
  for (int v = 0; v < n; ++v) {
    std::size_t rows = 1;
    for (NodeId p : dag.parents(v)) { (void)p; rows *= c; }
    cpts[v].assign(rows * c, 1.0 / c);
  }
  return Network(dag, std::vector<int>(n, c), cpts);
}

}  // namespace

TEST_CASE("validate reports value-level defects") {
  CHECK(validate(two_node()).empty());

  std::vector<Edge> e{{0, 1}};
  Network bad(Dag(2, e), {2, 2}, {{0.7, 0.3}, {0.9, 0.1, 0.2, 0.7}});
  const auto v = validate(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].defect == "row-normalization");
  CHECK(v[0].node == 1);
  CHECK(v[0].row == 1);

  Network neg(Dag(1), {2}, {{-0.1, 1.1}});
  REQUIRE(validate(neg).size() == 1);
  CHECK(validate(neg)[0].defect == "range");

  CHECK_THROWS_AS(Network(Dag(1), {2}, {{0.5, 0.25, 0.25}}), ArgumentError);
}

TEST_CASE("validate counts injected faults") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Network clean = oracle::random_network(8, 0.3, 3, rng);
    std::vector<std::vector<double>> cpts;
    int injected = 0;
    for (NodeId v = 0; v < clean.size(); ++v) {
      std::vector<double> t(clean.cpt(v).begin(), clean.cpt(v).end());
      for (std::size_t r = 0; r < clean.row_count(v); ++r)
        if (std::bernoulli_distribution(0.2)(rng)) {
          t[r * clean.cardinality(v)] *= 0.5;
          ++injected;
        }
      cpts.push_back(t);
    }
    Network perturbed(clean.dag(), clean.cardinalities(), cpts);
    CHECK(validate(perturbed).size() == static_cast<std::size_t>(injected));
  }
}

TEST_CASE("joint probability") {
  const Network bn = two_node();
  std::vector<int> x{1, 1};
  CHECK(joint_probability(bn, x) == doctest::Approx(0.24).epsilon(1e-14));
  std::vector<int> incomplete{1};
  CHECK_THROWS_AS(joint_probability(bn, incomplete), ArgumentError);

  std::mt19937_64 rng(22);
  const Network u = uniform_network(6, 3, rng);
  std::vector<int> y{0, 1, 2, 0, 1, 2};
  CHECK(joint_probability(u, y) == doctest::Approx(std::pow(3.0, -6)).epsilon(1e-12));

  for (int trial = 0; trial < 20; ++trial) {
    const Network r = oracle::random_network(7, 0.4, 3, rng);
    std::vector<int> z(7);
    for (int v = 0; v < 7; ++v) z[v] = std::uniform_int_distribution<int>(0, r.cardinality(v) - 1)(rng);
    double expected = 1.0;
    for (int v = 0; v < 7; ++v) {
      // Independent lookup: walk parents manually.
      std::size_t row = 0;
      for (NodeId p : r.dag().parents(v)) row = row * r.cardinality(p) + z[p];
      expected *= r.cpt(v)[row * r.cardinality(v) + z[v]];
    }
    CHECK(joint_probability(r, z) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("joint sums to one over every assignment") {
  std::mt19937_64 rng(23);
  const Network bn = oracle::random_network(12, 0.25, 2, rng);
  CHECK(enumerate_marginal(bn, {}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumerated marginals") {
  const Network bn = two_node();
  CHECK(enumerate_marginal(bn, {{0, 1}, {1, 1}}) == doctest::Approx(0.24).epsilon(1e-14));
  CHECK(enumerate_marginal(bn, {}) == doctest::Approx(1.0));
  CHECK(enumerate_marginal(bn, {{1, 1}}) == doctest::Approx(0.7 * 0.1 + 0.3 * 0.8));
  CHECK_THROWS_AS(enumerate_marginal(bn, {{1, 2}}), ArgumentError);
  CHECK_THROWS_AS(enumerate_marginal(bn, {{4, 0}}), IdentifierError);

  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 15; ++trial) {
    const Network r = oracle::random_network(8, 0.35, 3, rng);
    Evidence e = oracle::random_evidence(r, 0.4, rng);
    const double base = enumerate_marginal(r, e);
    for (NodeId v = 0; v < r.size(); ++v) {
      if (e.count(v)) continue;
      double sum = 0.0;
      for (int s = 0; s < r.cardinality(v); ++s) {
        Evidence ext = e;
        ext[v] = s;
        const double p = enumerate_marginal(r, ext);
        CHECK(p <= base * (1 + 1e-12));
        sum += p;
      }
      CHECK(sum == doctest::Approx(base).epsilon(1e-11));
    }
  }
}

TEST_CASE("enumeration cap is an explicit error") {
  std::mt19937_64 rng(25);
  const Network bn = oracle::random_network(24, 0.1, 2, rng);
  CHECK_THROWS_AS(enumerate_marginal(bn, {}), CapacityError);
  CHECK_NOTHROW(enumerate_marginal(bn, {{0, 0}, {1, 0}}));
}

TEST_CASE("forward sampling") {
  std::vector<Edge> e{{0, 1}, {1, 2}};
  Network forced(Dag(3, e), {2, 2, 2}, {{0.0, 1.0}, {1.0, 0.0, 1.0, 0.0}, {0.0, 1.0, 0.0, 1.0}});
  for (const auto& x : sample_forward(forced, 50, 3)) CHECK(x == FullAssignment{1, 0, 1});

  std::mt19937_64 rng(26);
  const Network bn = oracle::random_network(3, 0.8, 2, rng);
  CHECK(sample_forward(bn, 100, 9) == sample_forward(bn, 100, 9));

  const std::size_t n = 100000;
  const auto samples = sample_forward(bn, n, 77);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        std::vector<int> x{a, b, c};
        const double p = joint_probability(bn, x);
        std::size_t hits = 0;
        for (const auto& s : samples) hits += (s == x);
        const double sigma = std::sqrt(n * p * (1 - p));
        CHECK(std::abs(static_cast<double>(hits) - n * p) <= 3 * sigma + 1);
      }
}
