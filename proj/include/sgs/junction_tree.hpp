#ifndef SGS_JUNCTION_TREE_HPP
#define SGS_JUNCTION_TREE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "sgs/decomposition.hpp"
#include "sgs/graph.hpp"
#include "sgs/network.hpp"

namespace sgs {

/// Clique tree over a scope of network nodes. Cliques, sepsets and table
/// axes use original node ids; each potential is laid out mixed-radix over
/// the clique's nodes in ascending id order, last node least significant.
struct CliqueTree {
  NodeSet scope;
  std::vector<NodeSet> cliques;
  std::vector<std::pair<int, int>> tree_edges;
  std::vector<NodeSet> sepsets;  // parallel to tree_edges
  std::vector<std::vector<int>> cardinalities;
  std::vector<std::vector<double>> potentials;
  /// Nodes whose CPT was multiplied into each clique.
  std::vector<NodeSet> assigned;
  int root = 0;

  std::size_t table_size(int clique) const { return potentials.at(clique).size(); }
};

struct JunctionTreeOptions {
  /// Largest admissible clique table, in joint states.
  std::size_t table_cap = std::size_t{1} << 20;
};

/// Moralize the families of the CPT-carrying nodes, triangulate (min-fill),
/// extract maximal cliques, connect them by a maximum-sepset spanning tree
/// and multiply every CPT of `scope \ ones_nodes` into the smallest clique
/// that holds its family. Nodes of `ones_nodes` contribute no factor.
CliqueTree build_junction_tree(const Network& bn, const NodeSet& scope, const NodeSet& ones_nodes = {},
                               JunctionTreeOptions options = {});

/// Whole network, every CPT.
CliqueTree build_junction_tree(const Network& bn, JunctionTreeOptions options = {});

/// Zero every potential entry that disagrees with an observed value.
CliqueTree incorporate_evidence(CliqueTree jt, const Evidence& values);

/// One sum-product collect pass towards `root`; returns log of the sum of
/// the root belief.
double log_collect_to_root(const CliqueTree& jt, int root);
inline double log_collect_to_root(const CliqueTree& jt) { return log_collect_to_root(jt, jt.root); }

/// log P(X_ech | X_{emb \ ech}) for one subset of a decomposition.
double log_subset_marginal_exact(const Network& bn, const NodeSet& subset, const SubsetBoundary& boundary,
                                 const Evidence& e, JunctionTreeOptions options = {});

/// log P(X_e) by a single junction tree over the relevant subgraph.
double log_exact_marginal(const Network& bn, const Evidence& e, JunctionTreeOptions options = {});

}  // namespace sgs

#endif  // SGS_JUNCTION_TREE_HPP
