#include "sgs/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sgs/errors.hpp"
#include "sgs/numeric.hpp"

namespace sgs {

Network::Network(Dag dag, std::vector<int> cardinalities, std::vector<std::vector<double>> cpts,
                 std::vector<std::string> names, std::vector<std::vector<std::string>> state_names)
    : dag_(std::move(dag)),
      cardinalities_(std::move(cardinalities)),
      cpts_(std::move(cpts)),
      names_(std::move(names)),
      state_names_(std::move(state_names)) {
  const auto n = static_cast<std::size_t>(dag_.size());
  if (cardinalities_.size() != n || cpts_.size() != n)
    throw ArgumentError("network needs one cardinality and one CPT per node");
  if (names_.empty())
    for (std::size_t v = 0; v < n; ++v) names_.push_back("X" + std::to_string(v));
  if (names_.size() != n) throw ArgumentError("network needs one name per node");
  if (std::set<std::string>(names_.begin(), names_.end()).size() != n)
    throw ArgumentError("variable names must be unique");
  if (state_names_.empty()) {
    state_names_.resize(n);
    for (std::size_t v = 0; v < n; ++v)
      for (int s = 0; s < std::max(cardinalities_[v], 0); ++s) state_names_[v].push_back(std::to_string(s));
  }
  if (state_names_.size() != n) throw ArgumentError("network needs state names for every node");

  for (NodeId v = 0; v < dag_.size(); ++v) {
    if (cardinalities_[v] < 1) throw ArgumentError("variable " + names_[v] + " has no states");
    if (state_names_[v].size() != static_cast<std::size_t>(cardinalities_[v]))
      throw ArgumentError("variable " + names_[v] + " has mismatched state names");
    std::size_t rows = 1;
    for (NodeId p : dag_.parents(v)) rows *= static_cast<std::size_t>(cardinalities_[p]);
    if (cpts_[v].size() != rows * cardinalities_[v])
      throw ArgumentError("CPT of " + names_[v] + " has " + std::to_string(cpts_[v].size()) + " entries, expected " +
                          std::to_string(rows * cardinalities_[v]));
  }
}

std::optional<NodeId> Network::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

std::optional<int> Network::find_state(NodeId v, std::string_view state) const {
  const auto& states = state_names_.at(v);
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) return std::nullopt;
  return static_cast<int>(it - states.begin());
}

std::size_t Network::row_index(NodeId v, std::span<const int> states) const {
  std::size_t row = 0;
  for (NodeId p : dag_.parents(v)) row = row * cardinalities_[p] + states[p];
  return row;
}

double Network::log_probability(NodeId v, std::span<const int> states) const {
  return std::log(probability(v, states));
}

Network Network::induced(const NodeSet& keep) const {
  for (NodeId v : keep)
    if (!is_subset(dag_.parents(v), keep))
      throw ArgumentError("induced network would drop a parent of " + names_.at(v));
  std::vector<int> card;
  std::vector<std::vector<double>> cpts;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> states;
  for (NodeId v : keep) {
    card.push_back(cardinalities_[v]);
    cpts.push_back(cpts_[v]);
    names.push_back(names_[v]);
    states.push_back(state_names_[v]);
  }
  // Parents keep their relative order under an order-preserving relabel, so
  // CPT rows need no permutation.
  return Network(dag_.induced(keep), std::move(card), std::move(cpts), std::move(names), std::move(states));
}

std::vector<Violation> validate(const Network& bn, double row_tolerance) {
  std::vector<Violation> out;
  for (NodeId v = 0; v < bn.size(); ++v) {
    const int c = bn.cardinality(v);
    if (c < 2)
      out.push_back({v, -1, "cardinality", bn.name(v) + " has " + std::to_string(c) + " state(s); at least 2 required"});
    const auto table = bn.cpt(v);
    for (std::size_t r = 0; r < bn.row_count(v); ++r) {
      auto row = table.subspan(r * c, c);
      bool in_range = std::all_of(row.begin(), row.end(), [](double p) { return p >= 0.0 && p <= 1.0; });
      if (!in_range) {
        out.push_back({v, static_cast<long>(r), "range", bn.name(v) + " row " + std::to_string(r) +
                                                           " has an entry outside [0, 1]"});
        continue;
      }
      double sum = 0.0;
      for (double p : row) sum += p;
      if (std::abs(sum - 1.0) > row_tolerance)
        out.push_back({v, static_cast<long>(r), "row-normalization",
                       bn.name(v) + " row " + std::to_string(r) + " sums to " + std::to_string(sum)});
    }
  }
  return out;
}

void check_evidence(const Network& bn, const Evidence& e) {
  for (const auto& [v, s] : e) {
    if (v < 0 || v >= bn.size()) throw IdentifierError("evidence on unknown node id " + std::to_string(v));
    if (s < 0 || s >= bn.cardinality(v))
      throw ArgumentError("evidence state " + std::to_string(s) + " out of range for " + bn.name(v));
  }
}

NodeSet evidence_nodes(const Evidence& e) {
  NodeSet out;
  out.reserve(e.size());
  for (const auto& [v, s] : e) out.push_back(v);
  return out;
}

namespace {

void check_full(const Network& bn, std::span<const int> x) {
  if (static_cast<int>(x.size()) != bn.size()) throw ArgumentError("assignment does not cover every node");
  for (NodeId v = 0; v < bn.size(); ++v)
    if (x[v] < 0 || x[v] >= bn.cardinality(v))
      throw ArgumentError("state out of range for " + bn.name(v));
}

}  // namespace

double log_joint_probability(const Network& bn, std::span<const int> x) {
  check_full(bn, x);
  double total = 0.0;
  for (NodeId v = 0; v < bn.size(); ++v) total += bn.log_probability(v, x);
  return total;
}

double joint_probability(const Network& bn, std::span<const int> x) { return std::exp(log_joint_probability(bn, x)); }

double log_enumerate_marginal(const Network& bn, const Evidence& e, EnumerationLimits limits) {
  check_evidence(bn, e);
  std::vector<int> x(bn.size(), 0);
  NodeSet free;
  double work = 0.0;
  for (NodeId v = 0; v < bn.size(); ++v) {
    if (auto it = e.find(v); it != e.end()) {
      x[v] = it->second;
    } else {
      free.push_back(v);
      work += std::log2(static_cast<double>(bn.cardinality(v)));
    }
  }
  if (work > limits.max_binary_equivalent + 1e-9)
    throw CapacityError("enumeration over " + std::to_string(free.size()) + " variables exceeds the cap of 2^" +
                        std::to_string(limits.max_binary_equivalent) + " configurations");

  LogSumExp acc;
  while (true) {
    double lp = 0.0;
    for (NodeId v = 0; v < bn.size() && lp != kNegInf; ++v) lp += bn.log_probability(v, x);
    acc.add(lp);
    // Odometer step over the free variables.
    std::size_t k = 0;
    for (; k < free.size(); ++k) {
      if (++x[free[k]] < bn.cardinality(free[k])) break;
      x[free[k]] = 0;
    }
    if (k == free.size()) break;
  }
  return acc.value();
}

double enumerate_marginal(const Network& bn, const Evidence& e, EnumerationLimits limits) {
  return std::exp(log_enumerate_marginal(bn, e, limits));
}

std::vector<FullAssignment> sample_forward(const Network& bn, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const auto order = topological_order(bn.dag());
  std::vector<FullAssignment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    FullAssignment x(bn.size(), 0);
    for (NodeId v : order) {
      const int c = bn.cardinality(v);
      x[v] = sample_categorical(bn.cpt(v).subspan(bn.row_index(v, x) * c, c), rng);
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace sgs
