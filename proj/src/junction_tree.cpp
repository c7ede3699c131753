#include "sgs/junction_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgs/errors.hpp"
#include "sgs/numeric.hpp"
#include "table_index.hpp"

namespace sgs {

namespace {

std::vector<NodeSet> maximal_cliques(const std::vector<NodeSet>& candidates) {
  std::vector<NodeSet> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool contained = is_subset(candidates[i], candidates[j]);
      // Equal candidates: keep the first occurrence only.
      dominated = contained && (candidates[i].size() < candidates[j].size() || j < i);
    }
    if (!dominated) out.push_back(candidates[i]);
  }
  return out;
}

// Prim's algorithm on the complete clique graph, weight = |sepset|. Ties go
// to the lexicographically smallest (tree clique, new clique) pair.
std::vector<std::pair<int, int>> max_sepset_tree(const std::vector<NodeSet>& cliques) {
  const int t = static_cast<int>(cliques.size());
  std::vector<bool> in_tree(t, false);
  std::vector<std::pair<int, int>> edges;
  if (t == 0) return edges;
  in_tree[0] = true;
  for (int added = 1; added < t; ++added) {
    int best_from = -1, best_to = -1;
    long best_weight = -1;
    for (int i = 0; i < t; ++i) {
      if (!in_tree[i]) continue;
      for (int j = 0; j < t; ++j) {
        if (in_tree[j]) continue;
        long w = static_cast<long>(set_intersection(cliques[i], cliques[j]).size());
        if (w > best_weight) {
          best_weight = w;
          best_from = i;
          best_to = j;
        }
      }
    }
    in_tree[best_to] = true;
    edges.emplace_back(best_from, best_to);
  }
  return edges;
}

std::vector<int> cards_of(const Network& bn, const NodeSet& nodes) {
  std::vector<int> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) out.push_back(bn.cardinality(v));
  return out;
}

}  // namespace

CliqueTree build_junction_tree(const Network& bn, const NodeSet& scope, const NodeSet& ones_nodes,
                               JunctionTreeOptions options) {
  for (NodeId v : scope)
    if (!bn.dag().contains(v)) throw IdentifierError("unknown node id " + std::to_string(v));
  if (!is_subset(ones_nodes, scope)) throw ArgumentError("ones_nodes must lie inside the clique-tree scope");

  CliqueTree jt;
  jt.scope = scope;
  const NodeSet factor_nodes = set_difference(scope, ones_nodes);

  auto local = [&](NodeId v) {
    return static_cast<NodeId>(std::lower_bound(scope.begin(), scope.end(), v) - scope.begin());
  };
  UndirectedGraph moral(static_cast<int>(scope.size()));
  for (NodeId v : factor_nodes) {
    const NodeSet& pa = bn.parents(v);
    if (!is_subset(pa, scope))
      throw ArgumentError("family of " + bn.name(v) + " is not contained in the clique-tree scope");
    NodeSet family = set_union(pa, {v});
    for (std::size_t i = 0; i < family.size(); ++i)
      for (std::size_t j = i + 1; j < family.size(); ++j) moral.add_edge(local(family[i]), local(family[j]));
  }

  const Triangulation tri = triangulate(moral);
  for (const NodeSet& c : maximal_cliques(tri.elimination_cliques)) {
    NodeSet global;
    for (NodeId v : c) global.push_back(scope[v]);
    jt.cliques.push_back(make_node_set(std::move(global)));
  }
  for (std::size_t i = 0; i < jt.cliques.size(); ++i) {
    jt.cardinalities.push_back(cards_of(bn, jt.cliques[i]));
    double log2_size = 0.0;
    for (int c : jt.cardinalities.back()) log2_size += std::log2(static_cast<double>(c));
    if (log2_size > std::log2(static_cast<double>(options.table_cap)) + 1e-9)
      throw CapacityError("clique of " + std::to_string(jt.cliques[i].size()) + " variables exceeds the table cap of " +
                          std::to_string(options.table_cap) + " states");
  }

  jt.tree_edges = max_sepset_tree(jt.cliques);
  for (const auto& [a, b] : jt.tree_edges) jt.sepsets.push_back(set_intersection(jt.cliques[a], jt.cliques[b]));

  jt.assigned.resize(jt.cliques.size());
  jt.potentials.resize(jt.cliques.size());
  for (std::size_t i = 0; i < jt.cliques.size(); ++i)
    jt.potentials[i].assign(detail::table_size(jt.cardinalities[i]), 1.0);

  for (NodeId v : factor_nodes) {
    const NodeSet family = set_union(bn.parents(v), {v});
    int target = -1;
    for (int i = 0; i < static_cast<int>(jt.cliques.size()); ++i)
      if (is_subset(family, jt.cliques[i]) &&
          (target < 0 || jt.potentials[i].size() < jt.potentials[target].size()))
        target = i;
    if (target < 0) throw ConsistencyError("no clique contains the family of " + bn.name(v));
    jt.assigned[target].push_back(v);
    const auto strides = detail::cpt_strides(bn, v, jt.cliques[target]);
    const auto table = bn.cpt(v);
    auto& psi = jt.potentials[target];
    detail::for_each_state(jt.cardinalities[target], strides,
                           [&](std::size_t i, std::size_t k) { psi[i] *= table[k]; });
  }
  return jt;
}

CliqueTree build_junction_tree(const Network& bn, JunctionTreeOptions options) {
  NodeSet all(bn.size());
  for (NodeId v = 0; v < bn.size(); ++v) all[v] = v;
  return build_junction_tree(bn, all, {}, options);
}

CliqueTree incorporate_evidence(CliqueTree jt, const Evidence& values) {
  for (const auto& [v, state] : values) {
    if (!set_contains(jt.scope, v))
      throw ArgumentError("evidence node " + std::to_string(v) + " is outside the clique-tree scope");
    for (std::size_t c = 0; c < jt.cliques.size(); ++c) {
      const NodeSet& clique = jt.cliques[c];
      auto pos = std::lower_bound(clique.begin(), clique.end(), v);
      if (pos == clique.end() || *pos != v) continue;
      const std::size_t axis = static_cast<std::size_t>(pos - clique.begin());
      std::size_t stride = 1;
      for (std::size_t k = clique.size(); k-- > axis + 1;) stride *= jt.cardinalities[c][k];
      const auto card = static_cast<std::size_t>(jt.cardinalities[c][axis]);
      auto& psi = jt.potentials[c];
      for (std::size_t i = 0; i < psi.size(); ++i)
        if ((i / stride) % card != static_cast<std::size_t>(state)) psi[i] = 0.0;
    }
  }
  return jt;
}

double log_collect_to_root(const CliqueTree& jt, int root) {
  const int t = static_cast<int>(jt.cliques.size());
  if (t == 0) return 0.0;
  if (root < 0 || root >= t) throw ArgumentError("root clique index out of range");

  // neighbours[i] = (clique, edge index)
  std::vector<std::vector<std::pair<int, int>>> neighbours(t);
  for (int e = 0; e < static_cast<int>(jt.tree_edges.size()); ++e) {
    const auto& [a, b] = jt.tree_edges[e];
    neighbours[a].emplace_back(b, e);
    neighbours[b].emplace_back(a, e);
  }

  // Parent links and a post-order from the root.
  std::vector<int> parent(t, -1), parent_edge(t, -1), order;
  std::vector<bool> seen(t, false);
  std::vector<int> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    order.push_back(c);
    for (const auto& [nb, e] : neighbours[c])
      if (!seen[nb]) {
        seen[nb] = true;
        parent[nb] = c;
        parent_edge[nb] = e;
        stack.push_back(nb);
      }
  }

  std::vector<std::vector<double>> belief = jt.potentials;
  double log_scale = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int c = *it;
    if (c == root) break;
    const int p = parent[c];
    const NodeSet& sep = jt.sepsets[parent_edge[c]];
    std::vector<int> sep_cards;
    for (NodeId v : sep) sep_cards.push_back(jt.cardinalities[c][std::lower_bound(jt.cliques[c].begin(), jt.cliques[c].end(), v) - jt.cliques[c].begin()]);

    // δ_{c→p} = Σ_{C_c \ S} β_c, where β_c already holds the messages from c's children.
    std::vector<double> message(detail::table_size(sep_cards), 0.0);
    const auto& bc = belief[c];
    detail::for_each_state(jt.cardinalities[c], detail::strides_within(jt.cliques[c], sep, sep_cards),
                           [&](std::size_t i, std::size_t k) { message[k] += bc[i]; });
    double total = 0.0;
    for (double m : message) total += m;
    if (total <= 0.0) return kNegInf;
    for (double& m : message) m /= total;
    log_scale += std::log(total);

    auto& bp = belief[p];
    detail::for_each_state(jt.cardinalities[p], detail::strides_within(jt.cliques[p], sep, sep_cards),
                           [&](std::size_t i, std::size_t k) { bp[i] *= message[k]; });
  }

  double total = 0.0;
  for (double b : belief[root]) total += b;
  if (total <= 0.0) return kNegInf;
  return log_scale + std::log(total);
}

double log_subset_marginal_exact(const Network& bn, const NodeSet& subset, const SubsetBoundary& boundary,
                                 const Evidence& e, JunctionTreeOptions options) {
  if (!set_intersection(subset, evidence_nodes(e)).empty())
    throw ArgumentError("subset contains evidence nodes");
  if (boundary.children.empty()) return 0.0;
  const NodeSet scope = set_union(subset, boundary.markov_blanket);
  const NodeSet ones = set_difference(boundary.markov_blanket, boundary.children);
  Evidence local;
  for (NodeId v : boundary.markov_blanket) {
    auto it = e.find(v);
    if (it == e.end()) throw ArgumentError("boundary node " + bn.name(v) + " carries no evidence value");
    local.emplace(v, it->second);
  }
  return log_collect_to_root(incorporate_evidence(build_junction_tree(bn, scope, ones, options), local));
}

double log_exact_marginal(const Network& bn, const Evidence& e, JunctionTreeOptions options) {
  check_evidence(bn, e);
  const NodeSet scope = relevant_nodes(bn.dag(), evidence_nodes(e));
  if (scope.empty()) return 0.0;
  return log_collect_to_root(incorporate_evidence(build_junction_tree(bn, scope, {}, options), e));
}

}  // namespace sgs
