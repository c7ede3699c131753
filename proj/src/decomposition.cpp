#include "sgs/decomposition.hpp"

#include <algorithm>
#include <string>

#include "sgs/errors.hpp"

namespace sgs {

namespace {

void check_nodes(const Dag& dag, const NodeSet& nodes) {
  for (NodeId v : nodes)
    if (!dag.contains(v)) throw IdentifierError("unknown node id " + std::to_string(v));
}

NodeSet map_back(const NodeSet& local, const NodeSet& origin) {
  NodeSet out;
  out.reserve(local.size());
  for (NodeId v : local) out.push_back(origin[v]);
  return out;
}

NodeSet to_local(const NodeSet& global, const NodeSet& origin) {
  NodeSet out;
  for (NodeId v : global) {
    auto it = std::lower_bound(origin.begin(), origin.end(), v);
    if (it != origin.end() && *it == v) out.push_back(static_cast<NodeId>(it - origin.begin()));
  }
  return out;
}

}  // namespace

NodeSet relevant_nodes(const Dag& dag, const NodeSet& e) {
  check_nodes(dag, e);
  return set_union(e, ancestors(dag, e));
}

NodeSet irrelevant_nodes(const Dag& dag, const NodeSet& e) {
  NodeSet all(dag.size());
  for (NodeId v = 0; v < dag.size(); ++v) all[v] = v;
  return set_difference(all, relevant_nodes(dag, e));
}

Network relevant_subgraph(const Network& bn, const NodeSet& e) { return bn.induced(relevant_nodes(bn.dag(), e)); }

std::vector<NodeSet> find_subsets(const Dag& dag, const NodeSet& e) {
  check_nodes(dag, e);
  std::vector<bool> removed(dag.size(), false);
  for (NodeId v : e) removed[v] = true;
  return connected_components(moralize(dag), removed);
}

SubsetBoundary subset_boundaries(const Dag& dag, const NodeSet& subset, const NodeSet& e) {
  check_nodes(dag, subset);
  if (!set_intersection(subset, e).empty()) throw ArgumentError("subset contains evidence nodes");
  NodeSet blanket, children, parents;
  for (NodeId u : subset) {
    blanket = set_union(blanket, markov_blanket(dag, u));
    children = set_union(children, dag.children(u));
    parents = set_union(parents, dag.parents(u));
  }
  return SubsetBoundary{set_intersection(e, blanket), set_intersection(e, children), set_intersection(e, parents)};
}

SubsetDecomposition decompose(const Network& bn, const Evidence& e) {
  check_evidence(bn, e);
  const NodeSet observed = evidence_nodes(e);
  SubsetDecomposition out;
  out.relevant_nodes = relevant_nodes(bn.dag(), observed);

  const Dag sub = bn.dag().induced(out.relevant_nodes);
  const NodeSet local_e = to_local(observed, out.relevant_nodes);
  NodeSet covered_children;
  for (const NodeSet& local_subset : find_subsets(sub, local_e)) {
    SubsetBoundary b = subset_boundaries(sub, local_subset, local_e);
    out.subsets.push_back(map_back(local_subset, out.relevant_nodes));
    out.boundaries.push_back({map_back(b.markov_blanket, out.relevant_nodes),
                              map_back(b.children, out.relevant_nodes), map_back(b.parents, out.relevant_nodes)});
    covered_children = set_union(covered_children, out.boundaries.back().children);
  }
  out.leftover_evidence = set_difference(observed, covered_children);
  for (NodeId v : out.leftover_evidence)
    if (!is_subset(bn.parents(v), observed))
      throw ConsistencyError("leftover evidence node " + bn.name(v) + " has an unobserved parent");
  return out;
}

}  // namespace sgs
