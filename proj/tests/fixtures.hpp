#ifndef SGS_TESTS_FIXTURES_HPP
#define SGS_TESTS_FIXTURES_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "sgs/network.hpp"

namespace fixture {

/// Binary network from named edges with fixed, varied CPT rows.
inline sgs::Network binary_network(const std::vector<std::string>& names,
                                   const std::vector<std::pair<std::string, std::string>>& edges) {
  auto id = [&](const std::string& n) {
    return static_cast<sgs::NodeId>(std::find(names.begin(), names.end(), n) - names.begin());
  };
  std::vector<sgs::Edge> e;
  for (const auto& [a, b] : edges) e.emplace_back(id(a), id(b));
  sgs::Dag dag(static_cast<int>(names.size()), e);
  std::vector<std::vector<double>> cpts(names.size());
  for (sgs::NodeId v = 0; v < dag.size(); ++v) {
    std::size_t rows = std::size_t{1} << dag.parents(v).size();
    for (std::size_t r = 0; r < rows; ++r) {
      double p = 0.2 + 0.6 * static_cast<double>((r * 7 + v * 3) % 11) / 10.0;
      cpts[v].push_back(p);
      cpts[v].push_back(1.0 - p);
    }
  }
  return sgs::Network(dag, std::vector<int>(names.size(), 2), cpts, names);
}

/// Fifteen-node example: evidence {E, N, O} splits the relevant part into
/// {A, B} and {G, J, K, L}; C, D, F, H, I, M are barren.
inline sgs::Network figure_network() {
  return binary_network({"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M", "N", "O"},
                        {{"A", "E"}, {"B", "E"}, {"A", "C"}, {"B", "D"}, {"E", "F"}, {"E", "G"}, {"G", "H"},
                         {"G", "J"}, {"J", "I"}, {"J", "N"}, {"K", "N"}, {"K", "L"}, {"L", "O"}, {"L", "M"}});
}

inline sgs::NodeSet ids(const sgs::Network& bn, const std::vector<std::string>& names) {
  std::vector<sgs::NodeId> out;
  for (const auto& n : names) out.push_back(*bn.find(n));
  return sgs::make_node_set(out);
}

}  // namespace fixture

#endif  // SGS_TESTS_FIXTURES_HPP
