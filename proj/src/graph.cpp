#include "sgs/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <queue>
#include <string>

#include "sgs/errors.hpp"

namespace sgs {

namespace {

void insert_sorted(NodeSet& s, NodeId v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) s.insert(it, v);
}

NodeSet from_mask(const std::vector<bool>& mask) {
  NodeSet out;
  for (NodeId v = 0; v < static_cast<NodeId>(mask.size()); ++v)
    if (mask[v]) out.push_back(v);
  return out;
}

}  // namespace

NodeSet make_node_set(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const NodeSet& s, NodeId v) { return std::binary_search(s.begin(), s.end(), v); }

bool is_subset(const NodeSet& sub, const NodeSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(int node_count) {
  if (node_count < 0) throw ArgumentError("negative node count");
  parents_.resize(node_count);
  children_.resize(node_count);
}

Dag::Dag(int node_count, std::span<const Edge> edges) : Dag(node_count) {
  for (const auto& [from, to] : edges) {
    check_node(from);
    check_node(to);
    if (from == to) throw StructureError("self-loop on node " + std::to_string(from));
    if (set_contains(children_[from], to))
      throw StructureError("duplicate edge " + std::to_string(from) + "->" + std::to_string(to));
    insert_sorted(children_[from], to);
    insert_sorted(parents_[to], from);
    ++edge_count_;
  }
  // Throws on a cycle.
  (void)topological_order(*this);
}

void Dag::check_node(NodeId v) const {
  if (!contains(v)) throw IdentifierError("unknown node id " + std::to_string(v));
}

const NodeSet& Dag::parents(NodeId v) const {
  check_node(v);
  return parents_[v];
}

const NodeSet& Dag::children(NodeId v) const {
  check_node(v);
  return children_[v];
}

bool Dag::has_edge(NodeId from, NodeId to) const {
  check_node(from);
  check_node(to);
  return set_contains(children_[from], to);
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId v = 0; v < size(); ++v)
    for (NodeId c : children_[v]) out.emplace_back(v, c);
  return out;
}

Dag Dag::induced(const NodeSet& keep) const {
  std::vector<NodeId> index(size(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    check_node(keep[i]);
    index[keep[i]] = static_cast<NodeId>(i);
  }
  std::vector<Edge> kept;
  for (NodeId v : keep)
    for (NodeId c : children_[v])
      if (index[c] >= 0) kept.emplace_back(index[v], index[c]);
  return Dag(static_cast<int>(keep.size()), kept);
}

Dag Dag::relabeled(std::span<const NodeId> mapping) const {
  if (static_cast<int>(mapping.size()) != size()) throw ArgumentError("relabel mapping has wrong size");
  std::vector<Edge> out;
  for (const auto& [from, to] : edges()) out.emplace_back(mapping[from], mapping[to]);
  return Dag(size(), out);
}

// ---------------------------------------------------------------------------
// Structural queries

namespace {

std::vector<bool> closure(const Dag& dag, const NodeSet& start, bool upward) {
  std::vector<bool> seen(dag.size(), false);
  std::vector<NodeId> stack;
  for (NodeId v : start) {
    const NodeSet& next = upward ? dag.parents(v) : dag.children(v);
    stack.insert(stack.end(), next.begin(), next.end());
  }
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    const NodeSet& next = upward ? dag.parents(v) : dag.children(v);
    for (NodeId w : next)
      if (!seen[w]) stack.push_back(w);
  }
  return seen;
}

}  // namespace

NodeSet ancestors(const Dag& dag, const NodeSet& nodes) { return from_mask(closure(dag, nodes, true)); }

NodeSet descendants(const Dag& dag, const NodeSet& nodes) { return from_mask(closure(dag, nodes, false)); }

Relations relations(const Dag& dag, NodeId v) {
  if (!dag.contains(v)) throw IdentifierError("unknown node id " + std::to_string(v));
  return Relations{dag.parents(v), dag.children(v), descendants(dag, {v}), ancestors(dag, {v})};
}

NodeSet markov_blanket(const Dag& dag, NodeId v) {
  NodeSet out = set_union(dag.parents(v), dag.children(v));
  for (NodeId c : dag.children(v)) out = set_union(out, dag.parents(c));
  return set_difference(out, {v});
}

std::vector<NodeId> topological_order(const Dag& dag) {
  const int n = dag.size();
  std::vector<int> indegree(n);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n; ++v) {
    indegree[v] = static_cast<int>(dag.parents(v).size());
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (NodeId c : dag.children(v))
      if (--indegree[c] == 0) ready.push(c);
  }
  if (static_cast<int>(order.size()) != n) {
    std::string members;
    for (NodeId v = 0; v < n; ++v)
      if (indegree[v] > 0) members += (members.empty() ? "" : ",") + std::to_string(v);
    throw StructureError("directed cycle among nodes {" + members + "}");
  }
  return order;
}

// ---------------------------------------------------------------------------
// Undirected graphs

void UndirectedGraph::add_edge(NodeId a, NodeId b) {
  if (a < 0 || b < 0 || a >= size() || b >= size()) throw IdentifierError("edge endpoint out of range");
  if (a == b) return;
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
}

bool UndirectedGraph::adjacent(NodeId a, NodeId b) const { return set_contains(adjacency_.at(a), b); }

std::size_t UndirectedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : adjacency_) twice += nb.size();
  return twice / 2;
}

std::vector<Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  for (NodeId v = 0; v < size(); ++v)
    for (NodeId w : adjacency_[v])
      if (v < w) out.emplace_back(v, w);
  return out;
}

UndirectedGraph UndirectedGraph::induced(const NodeSet& keep) const {
  std::vector<NodeId> index(size(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index.at(keep[i]) = static_cast<NodeId>(i);
  UndirectedGraph out(static_cast<int>(keep.size()));
  for (NodeId v : keep)
    for (NodeId w : adjacency_[v])
      if (index[w] >= 0) out.add_edge(index[v], index[w]);
  return out;
}

UndirectedGraph moralize(const Dag& dag) {
  UndirectedGraph moral(dag.size());
  for (NodeId v = 0; v < dag.size(); ++v) {
    const NodeSet& pa = dag.parents(v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      moral.add_edge(pa[i], v);
      for (std::size_t j = i + 1; j < pa.size(); ++j) moral.add_edge(pa[i], pa[j]);
    }
  }
  return moral;
}

Triangulation triangulate(const UndirectedGraph& graph) {
  const int n = graph.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : graph.edges()) adj[a][b] = adj[b][a] = 1;

  Triangulation result;
  result.chordal = graph;
  std::vector<bool> eliminated(n, false);

  auto remaining_neighbors = [&](NodeId v) {
    NodeSet nb;
    for (NodeId w = 0; w < n; ++w)
      if (!eliminated[w] && adj[v][w]) nb.push_back(w);
    return nb;
  };

  for (int step = 0; step < n; ++step) {
    NodeId best = -1;
    std::size_t best_fill = 0, best_degree = 0;
    for (NodeId v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      NodeSet nb = remaining_neighbors(v);
      std::size_t fill = 0;
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
          if (!adj[nb[i]][nb[j]]) ++fill;
      if (best < 0 || fill < best_fill || (fill == best_fill && nb.size() < best_degree)) {
        best = v;
        best_fill = fill;
        best_degree = nb.size();
      }
    }
    NodeSet nb = remaining_neighbors(best);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]][nb[j]]) {
          adj[nb[i]][nb[j]] = adj[nb[j]][nb[i]] = 1;
          result.chordal.add_edge(nb[i], nb[j]);
        }
    eliminated[best] = true;
    result.elimination_order.push_back(best);
    nb.push_back(best);
    result.elimination_cliques.push_back(make_node_set(std::move(nb)));
  }
  return result;
}

bool is_chordal(const UndirectedGraph& graph) {
  const int n = graph.size();
  std::vector<int> weight(n, 0), position(n, -1);
  std::vector<NodeId> order;
  for (int step = 0; step < n; ++step) {
    NodeId pick = -1;
    for (NodeId v = 0; v < n; ++v)
      if (position[v] < 0 && (pick < 0 || weight[v] > weight[pick])) pick = v;
    position[pick] = step;
    order.push_back(pick);
    for (NodeId w : graph.neighbors(pick))
      if (position[w] < 0) ++weight[w];
  }
  for (NodeId v : order) {
    NodeId latest = -1;
    NodeSet earlier;
    for (NodeId w : graph.neighbors(v))
      if (position[w] < position[v]) {
        earlier.push_back(w);
        if (latest < 0 || position[w] > position[latest]) latest = w;
      }
    for (NodeId w : earlier)
      if (w != latest && !graph.adjacent(w, latest)) return false;
  }
  return true;
}

std::vector<NodeSet> connected_components(const UndirectedGraph& graph, const std::vector<bool>& removed) {
  const int n = graph.size();
  auto is_removed = [&](NodeId v) { return !removed.empty() && removed[v]; };
  std::vector<bool> seen(n, false);
  std::vector<NodeSet> components;
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start] || is_removed(start)) continue;
    NodeSet component;
    std::vector<NodeId> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (NodeId w : graph.neighbors(v))
        if (!seen[w] && !is_removed(w)) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    components.push_back(make_node_set(std::move(component)));
  }
  return components;
}

// ---------------------------------------------------------------------------
// d-separation

bool d_separated(const Dag& dag, const NodeSet& a, const NodeSet& b, const NodeSet& z) {
  for (const NodeSet* s : {&a, &b, &z})
    for (NodeId v : *s)
      if (!dag.contains(v)) throw IdentifierError("unknown node id " + std::to_string(v));
  if (!set_intersection(a, b).empty() || !set_intersection(a, z).empty() || !set_intersection(b, z).empty())
    throw ArgumentError("d_separated requires pairwise disjoint node sets");

  const int n = dag.size();
  std::vector<bool> observed(n, false), observed_or_ancestor(n, false);
  for (NodeId v : z) observed[v] = observed_or_ancestor[v] = true;
  for (NodeId v : ancestors(dag, z)) observed_or_ancestor[v] = true;

  // Direction of arrival: up = came from a child, down = came from a parent.
  enum : int { up = 0, down = 1 };
  std::vector<std::array<bool, 2>> visited(n, {false, false});
  std::vector<bool> target(n, false);
  for (NodeId v : b) target[v] = true;

  std::deque<std::pair<NodeId, int>> queue;
  for (NodeId v : a) queue.emplace_back(v, up);
  while (!queue.empty()) {
    auto [v, dir] = queue.front();
    queue.pop_front();
    if (visited[v][dir]) continue;
    visited[v][dir] = true;
    if (!observed[v] && target[v]) return false;
    if (dir == up && !observed[v]) {
      for (NodeId p : dag.parents(v)) queue.emplace_back(p, up);
      for (NodeId c : dag.children(v)) queue.emplace_back(c, down);
    } else if (dir == down) {
      if (!observed[v])
        for (NodeId c : dag.children(v)) queue.emplace_back(c, down);
      if (observed_or_ancestor[v])
        for (NodeId p : dag.parents(v)) queue.emplace_back(p, up);
    }
  }
  return true;
}

}  // namespace sgs
