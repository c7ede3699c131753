#ifndef SGS_DECOMPOSITION_HPP
#define SGS_DECOMPOSITION_HPP

#include <vector>

#include "sgs/graph.hpp"
#include "sgs/network.hpp"

namespace sgs {

/// Evidence nodes adjacent to one subset, split by role.
struct SubsetBoundary {
  NodeSet markov_blanket;  // e ∩ mb(S)
  NodeSet children;        // e ∩ ch(S)
  NodeSet parents;         // e ∩ pa(S)

  friend bool operator==(const SubsetBoundary&, const SubsetBoundary&) = default;
};

/// Evidence-induced split of the relevant subgraph. All ids refer to the
/// original network.
struct SubsetDecomposition {
  NodeSet relevant_nodes;
  std::vector<NodeSet> subsets;
  std::vector<SubsetBoundary> boundaries;
  /// Evidence that is not a child of any subset; all its parents are
  /// evidence too.
  NodeSet leftover_evidence;
};

/// Nodes i with ({i} ∪ de(i)) ∩ e = ∅.
NodeSet irrelevant_nodes(const Dag& dag, const NodeSet& e);

/// e ∪ ancestors(e).
NodeSet relevant_nodes(const Dag& dag, const NodeSet& e);

/// The network restricted to e ∪ ancestors(e); node ids are renumbered in
/// ascending order of the retained original ids.
Network relevant_subgraph(const Network& bn, const NodeSet& e);

/// Conditionally independent subsets of the non-evidence nodes: connected
/// components of the moral graph once evidence nodes are deleted. `dag` must
/// already be the relevant subgraph w.r.t. `e`.
std::vector<NodeSet> find_subsets(const Dag& dag, const NodeSet& e);

SubsetBoundary subset_boundaries(const Dag& dag, const NodeSet& subset, const NodeSet& e);

SubsetDecomposition decompose(const Network& bn, const Evidence& e);

}  // namespace sgs

#endif  // SGS_DECOMPOSITION_HPP
