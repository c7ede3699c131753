#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sgs/errors.hpp"
#include "sgs/graph.hpp"

using namespace sgs;

namespace {

// A=0, B=1, C=2
Dag chain() {
  std::vector<Edge> e{{0, 1}, {1, 2}};
  return Dag(3, e);
}

Dag collider() {
  std::vector<Edge> e{{0, 2}, {1, 2}};
  return Dag(3, e);
}

}  // namespace

TEST_CASE("dag construction rejects malformed edge sets") {
  std::vector<Edge> loop{{0, 0}};
  CHECK_THROWS_AS(Dag(2, loop), StructureError);
  std::vector<Edge> dup{{0, 1}, {0, 1}};
  CHECK_THROWS_AS(Dag(2, dup), StructureError);
  std::vector<Edge> cycle{{0, 1}, {1, 2}, {2, 0}};
  CHECK_THROWS_AS(Dag(3, cycle), StructureError);
  std::vector<Edge> out_of_range{{0, 5}};
  CHECK_THROWS_AS(Dag(2, out_of_range), IdentifierError);
}

TEST_CASE("relations on a chain and an isolated node") {
  const Relations r = relations(chain(), 1);
  CHECK(r.parents == NodeSet{0});
  CHECK(r.children == NodeSet{2});
  CHECK(r.ancestors == NodeSet{0});
  CHECK(r.descendants == NodeSet{2});

  const Relations iso = relations(Dag(1), 0);
  CHECK(iso.parents.empty());
  CHECK(iso.children.empty());
  CHECK(iso.ancestors.empty());
  CHECK(iso.descendants.empty());

  CHECK_THROWS_AS(relations(chain(), 7), IdentifierError);
}

TEST_CASE("relations match the transitive-closure oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Dag dag = oracle::random_dag(10, 0.3, rng);
    const auto reach = oracle::reachability(dag);
    for (NodeId v = 0; v < 10; ++v) {
      const Relations r = relations(dag, v);
      NodeSet anc, desc;
      for (NodeId u = 0; u < 10; ++u) {
        if (reach[u][v]) anc.push_back(u);
        if (reach[v][u]) desc.push_back(u);
      }
      CHECK(r.ancestors == anc);
      CHECK(r.descendants == desc);
    }
  }
}

TEST_CASE("markov blanket") {
  CHECK(markov_blanket(chain(), 1) == NodeSet{0, 2});
  CHECK(markov_blanket(collider(), 0) == NodeSet{1, 2});
  CHECK_THROWS_AS(markov_blanket(chain(), -1), IdentifierError);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Dag dag = oracle::random_dag(10, 0.3, rng);
    const UndirectedGraph moral = moralize(dag);
    for (NodeId v = 0; v < 10; ++v) {
      CHECK(markov_blanket(dag, v) == oracle::blanket(dag, v));
      CHECK(markov_blanket(dag, v) == moral.neighbors(v));
    }
  }
}

TEST_CASE("topological order") {
  CHECK(topological_order(chain()) == std::vector<NodeId>{0, 1, 2});
  CHECK(topological_order(Dag(2)) == std::vector<NodeId>{0, 1});

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Dag dag = oracle::random_dag(12, 0.3, rng);
    const auto order = topological_order(dag);
    std::vector<int> pos(12, -1);
    for (int i = 0; i < 12; ++i) pos[order[i]] = i;
    for (int v = 0; v < 12; ++v) CHECK(pos[v] >= 0);
    for (auto [a, b] : dag.edges()) CHECK(pos[a] < pos[b]);
  }
}

TEST_CASE("moralization marries co-parents") {
  const UndirectedGraph m = moralize(collider());
  CHECK(m.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(moralize(chain()).edges() == std::vector<Edge>{{0, 1}, {1, 2}});

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Dag dag = oracle::random_dag(10, 0.35, rng);
    const UndirectedGraph moral = moralize(dag);
    for (NodeId v = 0; v < 10; ++v) {
      NodeSet family = set_union(dag.parents(v), {v});
      for (NodeId a : family)
        for (NodeId b : family)
          if (a != b) CHECK(moral.adjacent(a, b));
    }
  }
}

TEST_CASE("triangulation yields a chordal supergraph") {
  UndirectedGraph square(4);
  square.add_edge(0, 1);
  square.add_edge(1, 2);
  square.add_edge(2, 3);
  square.add_edge(3, 0);
  CHECK(oracle::has_chordless_cycle(square));
  const Triangulation t = triangulate(square);
  CHECK(t.chordal.edge_count() == 5);
  CHECK(!oracle::has_chordless_cycle(t.chordal));
  CHECK(is_chordal(t.chordal));
  CHECK_FALSE(is_chordal(square));

  UndirectedGraph tree(5);
  tree.add_edge(0, 1);
  tree.add_edge(1, 2);
  tree.add_edge(1, 3);
  tree.add_edge(3, 4);
  CHECK(triangulate(tree).chordal == tree);

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    const UndirectedGraph moral = moralize(oracle::random_dag(9, 0.3, rng));
    const Triangulation tri = triangulate(moral);
    for (auto [a, b] : moral.edges()) CHECK(tri.chordal.adjacent(a, b));
    CHECK_FALSE(oracle::has_chordless_cycle(tri.chordal));
    CHECK(is_chordal(tri.chordal) == !oracle::has_chordless_cycle(tri.chordal));
    CHECK(is_chordal(moral) == !oracle::has_chordless_cycle(moral));
    CHECK(tri.elimination_order.size() == 9);
  }
}

TEST_CASE("d-separation basics") {
  CHECK(d_separated(collider(), {0}, {1}, {}));
  CHECK_FALSE(d_separated(collider(), {0}, {1}, {2}));
  CHECK(d_separated(chain(), {0}, {2}, {1}));
  CHECK_FALSE(d_separated(chain(), {0}, {2}, {}));
  CHECK_THROWS_AS(d_separated(chain(), {0}, {0}, {}), ArgumentError);
  CHECK_THROWS_AS(d_separated(chain(), {0}, {2}, {0}), ArgumentError);

  // Observing a descendant of a collider opens it.
  std::vector<Edge> e{{0, 2}, {1, 2}, {2, 3}};
  CHECK_FALSE(d_separated(Dag(4, e), {0}, {1}, {3}));
}

TEST_CASE("d-separation agrees with trail enumeration and is symmetric") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 150; ++trial) {
    const Dag dag = oracle::random_dag(8, 0.3, rng);
    std::vector<int> role(8);
    for (int& r : role) r = std::uniform_int_distribution<int>(0, 3)(rng);
    NodeSet a, b, z;
    for (int v = 0; v < 8; ++v) {
      if (role[v] == 0) a.push_back(v);
      if (role[v] == 1) b.push_back(v);
      if (role[v] == 2) z.push_back(v);
    }
    if (a.empty() || b.empty()) continue;
    const bool sep = d_separated(dag, a, b, z);
    CHECK(sep == oracle::d_separated_by_paths(dag, a, b, z));
    CHECK(sep == d_separated(dag, b, a, z));
  }
}
