#ifndef SGS_TABLE_INDEX_HPP
#define SGS_TABLE_INDEX_HPP

// Mixed-radix table walking shared by the junction tree and loopy BP.

#include <cstddef>
#include <span>
#include <vector>

#include "sgs/graph.hpp"
#include "sgs/network.hpp"

namespace sgs::detail {

inline std::size_t table_size(std::span<const int> cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

/// Strides of each axis in `axes` within a table laid out over `sub_axes`
/// (ascending ids, last fastest). Axes absent from the sub-table get 0.
inline std::vector<std::size_t> strides_within(const NodeSet& axes, const NodeSet& sub_axes,
                                               std::span<const int> sub_cards) {
  std::vector<std::size_t> sub_stride(sub_axes.size());
  std::size_t s = 1;
  for (std::size_t k = sub_axes.size(); k-- > 0;) {
    sub_stride[k] = s;
    s *= static_cast<std::size_t>(sub_cards[k]);
  }
  std::vector<std::size_t> out(axes.size(), 0);
  for (std::size_t a = 0; a < axes.size(); ++a)
    for (std::size_t k = 0; k < sub_axes.size(); ++k)
      if (sub_axes[k] == axes[a]) out[a] = sub_stride[k];
  return out;
}

/// Strides of each axis in `axes` within the CPT of `v`.
inline std::vector<std::size_t> cpt_strides(const Network& bn, NodeId v, const NodeSet& axes) {
  std::vector<std::size_t> out(axes.size(), 0);
  std::size_t s = static_cast<std::size_t>(bn.cardinality(v));
  const NodeSet& pa = bn.parents(v);
  for (std::size_t k = pa.size(); k-- > 0;) {
    for (std::size_t a = 0; a < axes.size(); ++a)
      if (axes[a] == pa[k]) out[a] = s;
    s *= static_cast<std::size_t>(bn.cardinality(pa[k]));
  }
  for (std::size_t a = 0; a < axes.size(); ++a)
    if (axes[a] == v) out[a] = 1;
  return out;
}

/// Calls f(index, sub_index) for every joint state of a table with axis
/// sizes `cards` (last axis fastest); sub_index advances by `strides`.
template <class F>
void for_each_state(std::span<const int> cards, std::span<const std::size_t> strides, F&& f) {
  const std::size_t k = cards.size();
  const std::size_t total = table_size(cards);
  std::vector<int> counter(k, 0);
  std::size_t sub = 0;
  for (std::size_t i = 0; i < total; ++i) {
    f(i, sub);
    for (std::size_t a = k; a-- > 0;) {
      if (++counter[a] < cards[a]) {
        sub += strides[a];
        break;
      }
      counter[a] = 0;
      sub -= strides[a] * static_cast<std::size_t>(cards[a] - 1);
    }
  }
}

}  // namespace sgs::detail

#endif  // SGS_TABLE_INDEX_HPP
