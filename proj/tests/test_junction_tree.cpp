#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sgs/decomposition.hpp"
#include "sgs/errors.hpp"
#include "sgs/junction_tree.hpp"

using namespace sgs;

namespace {

// For every node, the cliques holding it must form a connected subtree.
bool running_intersection(const CliqueTree& jt) {
  const int t = static_cast<int>(jt.cliques.size());
  for (NodeId v : jt.scope) {
    std::vector<int> holders;
    for (int c = 0; c < t; ++c)
      if (std::binary_search(jt.cliques[c].begin(), jt.cliques[c].end(), v)) holders.push_back(c);
    if (holders.empty()) continue;
    std::vector<bool> seen(t, false);
    std::vector<int> stack{holders[0]};
    seen[holders[0]] = true;
    std::size_t reached = 0;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      ++reached;
      for (auto [a, b] : jt.tree_edges) {
        const int other = a == c ? b : (b == c ? a : -1);
        if (other < 0 || seen[other]) continue;
        if (!std::binary_search(jt.cliques[other].begin(), jt.cliques[other].end(), v)) continue;
        seen[other] = true;
        stack.push_back(other);
      }
    }
    if (reached != holders.size()) return false;
  }
  return true;
}

bool spanning_tree(const CliqueTree& jt) {
  const int t = static_cast<int>(jt.cliques.size());
  if (static_cast<int>(jt.tree_edges.size()) != t - 1) return false;
  std::vector<int> parent(t);
  for (int i = 0; i < t; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [a, b] : jt.tree_edges) {
    if (find(a) == find(b)) return false;
    parent[find(a)] = find(b);
  }
  return true;
}

// Product of every potential at a full assignment.
double potential_product(const CliqueTree& jt, const std::vector<int>& x) {
  double p = 1.0;
  for (std::size_t c = 0; c < jt.cliques.size(); ++c) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < jt.cliques[c].size(); ++k) idx = idx * jt.cardinalities[c][k] + x[jt.cliques[c][k]];
    p *= jt.potentials[c][idx];
  }
  return p;
}

}  // namespace

TEST_CASE("clique structure of small networks") {
  const Network chain = fixture::binary_network({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  const CliqueTree jc = build_junction_tree(chain);
  REQUIRE(jc.cliques.size() == 2);
  CHECK(jc.cliques[0] == NodeSet{0, 1});
  CHECK(jc.cliques[1] == NodeSet{1, 2});
  REQUIRE(jc.sepsets.size() == 1);
  CHECK(jc.sepsets[0] == NodeSet{1});

  const Network col = fixture::binary_network({"A", "B", "C"}, {{"A", "C"}, {"B", "C"}});
  const CliqueTree jk = build_junction_tree(col);
  REQUIRE(jk.cliques.size() == 1);
  CHECK(jk.cliques[0] == NodeSet{0, 1, 2});
  CHECK(jk.tree_edges.empty());
}

TEST_CASE("clique trees satisfy their structural invariants") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const Network bn = oracle::random_network(12, 0.3, 3, rng);
    const CliqueTree jt = build_junction_tree(bn);
    CHECK(spanning_tree(jt));
    CHECK(running_intersection(jt));
    for (std::size_t k = 0; k < jt.tree_edges.size(); ++k) {
      auto [a, b] = jt.tree_edges[k];
      CHECK(jt.sepsets[k] == set_intersection(jt.cliques[a], jt.cliques[b]));
    }
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < jt.cliques.size(); ++c)
      for (NodeId v : jt.assigned[c]) {
        ++assigned;
        CHECK(is_subset(set_union(bn.parents(v), {v}), jt.cliques[c]));
      }
    CHECK(assigned == static_cast<std::size_t>(bn.size()));

    // Product of potentials equals the joint at random full assignments.
    for (int s = 0; s < 10; ++s) {
      std::vector<int> x(bn.size());
      for (int v = 0; v < bn.size(); ++v) x[v] = std::uniform_int_distribution<int>(0, bn.cardinality(v) - 1)(rng);
      CHECK(potential_product(jt, x) == doctest::Approx(joint_probability(bn, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("capacity cap is an explicit error") {
  std::vector<Edge> edges;
  for (int i = 0; i < 6; ++i) edges.emplace_back(i, 6);
  std::vector<std::vector<double>> cpts(7, std::vector<double>{0.25, 0.25, 0.25, 0.25});
  cpts[6].assign(std::size_t{1} << 14, 0.25);
  const Network wide(Dag(7, edges), std::vector<int>(7, 4), cpts);
  CHECK_THROWS_AS(build_junction_tree(wide, JunctionTreeOptions{1000}), CapacityError);
  CHECK_NOTHROW(build_junction_tree(wide));
}

TEST_CASE("evidence incorporation") {
  const Network ab = fixture::binary_network({"A", "B"}, {{"A", "B"}});
  const CliqueTree jt = build_junction_tree(ab);
  REQUIRE(jt.cliques.size() == 1);
  const CliqueTree obs = incorporate_evidence(jt, {{1, 1}});
  for (int a = 0; a < 2; ++a) {
    CHECK(obs.potentials[0][a * 2 + 0] == 0.0);
    CHECK(obs.potentials[0][a * 2 + 1] == jt.potentials[0][a * 2 + 1]);
  }
  CHECK_THROWS_AS(incorporate_evidence(jt, {{5, 0}}), ArgumentError);

  // Every CPT suppressed and every node observed: the belief is one.
  const CliqueTree ones = build_junction_tree(ab, {0, 1}, {0, 1});
  CHECK(std::exp(log_collect_to_root(incorporate_evidence(ones, {{0, 1}, {1, 0}}))) == doctest::Approx(1.0));
}

TEST_CASE("subset marginal on a two-node network") {
  // P(v=1) = 0.3, P(c=1 | v) = (0.2, 0.9)
  std::vector<Edge> e{{0, 1}};
  const Network bn(Dag(2, e), {2, 2}, {{0.7, 0.3}, {0.8, 0.2, 0.1, 0.9}}, {"v", "c"});
  const SubsetDecomposition d = decompose(bn, {{1, 1}});
  REQUIRE(d.subsets.size() == 1);
  CHECK(std::exp(log_subset_marginal_exact(bn, d.subsets[0], d.boundaries[0], {{1, 1}})) ==
        doctest::Approx(0.41).epsilon(1e-14));

  // No evidence child: the conditional of an empty event.
  const SubsetBoundary none{{}, {}, {}};
  CHECK(log_subset_marginal_exact(bn, {0}, none, {}) == 0.0);
}

TEST_CASE("subset marginals match per-subset enumeration") {
  std::mt19937_64 rng(42);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Network bn = oracle::random_network(14, 0.22, 3, rng);
    const Evidence e = oracle::random_evidence(bn, 0.3, rng);
    const SubsetDecomposition d = decompose(bn, e);
    for (std::size_t k = 0; k < d.subsets.size(); ++k) {
      if (d.subsets[k].size() > 10) continue;
      const NodeSet factors = set_union(d.subsets[k], d.boundaries[k].children);
      const double expected = oracle::log_factor_sum(bn, d.subsets[k], factors, e);
      const double got = log_subset_marginal_exact(bn, d.subsets[k], d.boundaries[k], e);
      CHECK(std::abs(std::expm1(got - expected)) < 1e-10);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("collect result does not depend on the root") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const Network bn = oracle::random_network(12, 0.3, 3, rng);
    const Evidence e = oracle::random_evidence(bn, 0.3, rng);
    const CliqueTree jt = incorporate_evidence(build_junction_tree(bn), e);
    const double base = log_collect_to_root(jt, 0);
    for (int r = 1; r < static_cast<int>(jt.cliques.size()); ++r)
      CHECK(std::abs(log_collect_to_root(jt, r) - base) < 1e-12);
  }
}

TEST_CASE("full-network mode reproduces enumeration") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = std::uniform_int_distribution<int>(3, 20)(rng);
    const Network bn = oracle::random_network(n, 0.2, 2, rng);
    const Evidence e = oracle::random_evidence(bn, 0.3, rng);
    const double exact = log_enumerate_marginal(bn, e);
    CHECK(std::abs(std::expm1(log_exact_marginal(bn, e) - exact)) < 1e-10);
    const CliqueTree whole = incorporate_evidence(build_junction_tree(bn), e);
    CHECK(std::abs(std::expm1(log_collect_to_root(whole) - exact)) < 1e-10);
  }
}

TEST_CASE("zero-probability evidence gives negative infinity") {
  std::vector<Edge> e{{0, 1}};
  const Network bn(Dag(2, e), {2, 2}, {{1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}});
  CHECK(std::isinf(log_exact_marginal(bn, {{1, 1}})));
  CHECK(log_exact_marginal(bn, {{1, 1}}) < 0);
}
