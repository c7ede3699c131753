#ifndef SGS_GRAPH_HPP
#define SGS_GRAPH_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sgs {

using NodeId = int;

/// Sorted, duplicate-free list of node ids. Every set-valued result in the
/// library is returned in this canonical form.
using NodeSet = std::vector<NodeId>;

using Edge = std::pair<NodeId, NodeId>;

/// Directed acyclic graph over nodes 0..size()-1. Immutable after
/// construction; the constructor rejects self-loops, duplicate edges and
/// directed cycles.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int node_count);
  Dag(int node_count, std::span<const Edge> edges);

  int size() const noexcept { return static_cast<int>(parents_.size()); }
  bool contains(NodeId v) const noexcept { return v >= 0 && v < size(); }

  const NodeSet& parents(NodeId v) const;
  const NodeSet& children(NodeId v) const;
  bool has_edge(NodeId from, NodeId to) const;
  std::size_t edge_count() const noexcept { return edge_count_; }

  /// Edges sorted by (from, to).
  std::vector<Edge> edges() const;

  /// Subgraph induced by `keep`; node keep[i] becomes node i.
  Dag induced(const NodeSet& keep) const;

  /// Same graph with node v renamed to mapping[v].
  Dag relabeled(std::span<const NodeId> mapping) const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  void check_node(NodeId v) const;

  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::size_t edge_count_ = 0;
};

struct Relations {
  NodeSet parents;
  NodeSet children;
  NodeSet descendants;
  NodeSet ancestors;
};

Relations relations(const Dag& dag, NodeId v);

/// Strict ancestors of every node in `nodes` (excluding the nodes themselves
/// unless one is an ancestor of another).
NodeSet ancestors(const Dag& dag, const NodeSet& nodes);
NodeSet descendants(const Dag& dag, const NodeSet& nodes);

NodeSet markov_blanket(const Dag& dag, NodeId v);

/// Kahn's algorithm; among ready nodes the smallest id goes first.
std::vector<NodeId> topological_order(const Dag& dag);

class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int node_count) : adjacency_(node_count) {}

  int size() const noexcept { return static_cast<int>(adjacency_.size()); }
  void add_edge(NodeId a, NodeId b);
  bool adjacent(NodeId a, NodeId b) const;
  const NodeSet& neighbors(NodeId v) const { return adjacency_.at(v); }
  std::size_t edge_count() const;
  std::vector<Edge> edges() const;  // (a, b) with a < b

  /// Subgraph induced by `keep`, relabeled to 0..keep.size()-1.
  UndirectedGraph induced(const NodeSet& keep) const;

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  std::vector<NodeSet> adjacency_;
};

UndirectedGraph moralize(const Dag& dag);

struct Triangulation {
  UndirectedGraph chordal;
  std::vector<NodeId> elimination_order;
  /// Node eliminated at step i together with its not-yet-eliminated
  /// neighbours at that time.
  std::vector<NodeSet> elimination_cliques;
};

/// Greedy min-fill elimination; ties broken by remaining degree, then id.
Triangulation triangulate(const UndirectedGraph& graph);

/// Maximum-cardinality-search test for a perfect elimination ordering.
bool is_chordal(const UndirectedGraph& graph);

/// Connected components, each sorted, listed by smallest member.
std::vector<NodeSet> connected_components(const UndirectedGraph& graph,
                                          const std::vector<bool>& removed = {});

/// Reachability ("Bayes ball") test: true iff no active trail connects a
/// node of `a` to a node of `b` given `z`. The three sets must be disjoint.
bool d_separated(const Dag& dag, const NodeSet& a, const NodeSet& b, const NodeSet& z);

// Set helpers on canonical NodeSets.
NodeSet make_node_set(std::vector<NodeId> nodes);
NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_intersection(const NodeSet& a, const NodeSet& b);
NodeSet set_difference(const NodeSet& a, const NodeSet& b);
bool set_contains(const NodeSet& s, NodeId v);
bool is_subset(const NodeSet& sub, const NodeSet& super);

}  // namespace sgs

#endif  // SGS_GRAPH_HPP
