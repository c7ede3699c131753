#include "sgs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sgs {

using nlohmann::json;

namespace {

constexpr double kRowTolerance = 1e-6;

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void schema(const std::string& message) { throw ParseError(ParseCode::schema, message); }

const json& member(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema(where + " lacks \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const json& x : j) {
    if (!x.is_string()) schema(where + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

struct RawVariable {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> parents;
  std::vector<double> cpt;
};

std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", p);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines = split(text, '\n');
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::string_view to_string(ParseCode code) noexcept {
  switch (code) {
    case ParseCode::syntax: return "syntax";
    case ParseCode::schema: return "schema";
    case ParseCode::empty_network: return "empty_network";
    case ParseCode::duplicate_variable: return "duplicate_variable";
    case ParseCode::duplicate_state: return "duplicate_state";
    case ParseCode::too_few_states: return "too_few_states";
    case ParseCode::unresolved_parent: return "unresolved_parent";
    case ParseCode::self_parent: return "self_parent";
    case ParseCode::duplicate_parent: return "duplicate_parent";
    case ParseCode::cpt_length: return "cpt_length";
    case ParseCode::cpt_range: return "cpt_range";
    case ParseCode::row_sum: return "row_sum";
    case ParseCode::cycle: return "cycle";
    case ParseCode::row_width: return "row_width";
    case ParseCode::unknown_value: return "unknown_value";
  }
  return "unknown";
}

ParseError::ParseError(ParseCode code, const std::string& message, int line, int column)
    : Error(ErrorKind::parse, message), code_(code), line_(line), column_(column) {}

Network parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError(ParseCode::syntax,
                     "syntax error at line " + std::to_string(line) + ", column " + std::to_string(column), line,
                     column);
  }
  if (!doc.is_object()) schema("document must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "variables") schema("unknown top-level key \"" + key + "\"");
  const json& vars = member(doc, "variables", "document");
  if (!vars.is_array()) schema("\"variables\" must be an array");
  if (vars.empty()) throw ParseError(ParseCode::empty_network, "network has no variables");

  std::vector<RawVariable> raw;
  std::map<std::string, NodeId> index;
  for (const json& v : vars) {
    if (!v.is_object()) schema("each variable must be an object");
    RawVariable r;
    const json& name = member(v, "name", "variable");
    if (!name.is_string() || name.get<std::string>().empty()) schema("variable name must be a non-empty string");
    r.name = name.get<std::string>();
    const std::string where = "variable " + r.name;
    for (const auto& [key, value] : v.items())
      if (key != "name" && key != "states" && key != "parents" && key != "cpt")
        schema(where + " has unknown key \"" + key + "\"");
    r.states = string_list(member(v, "states", where), where + " states");
    r.parents = v.contains("parents") ? string_list(v["parents"], where + " parents") : std::vector<std::string>{};
    const json& cpt = member(v, "cpt", where);
    if (!cpt.is_array()) schema(where + " cpt must be an array of numbers");
    for (const json& x : cpt) {
      if (!x.is_number()) schema(where + " cpt must be an array of numbers");
      r.cpt.push_back(x.get<double>());
    }
    if (index.count(r.name)) throw ParseError(ParseCode::duplicate_variable, "duplicate variable " + r.name);
    index[r.name] = static_cast<NodeId>(raw.size());
    raw.push_back(std::move(r));
  }

  for (const RawVariable& r : raw) {
    if (r.states.size() < 2)
      throw ParseError(ParseCode::too_few_states, "variable " + r.name + " needs at least 2 states");
    for (const std::string& s : r.states)
      if (std::count(r.states.begin(), r.states.end(), s) > 1)
        throw ParseError(ParseCode::duplicate_state, "variable " + r.name + " repeats state " + s);
    std::set<std::string> seen;
    for (const std::string& p : r.parents) {
      if (p == r.name) throw ParseError(ParseCode::self_parent, "variable " + r.name + " lists itself as parent");
      if (!index.count(p))
        throw ParseError(ParseCode::unresolved_parent, "variable " + r.name + " has unknown parent " + p);
      if (!seen.insert(p).second)
        throw ParseError(ParseCode::duplicate_parent, "variable " + r.name + " repeats parent " + p);
    }
  }

  // Cycle check with the cycle spelled out.
  std::vector<int> colour(raw.size(), 0);
  std::vector<NodeId> stack;
  std::function<void(NodeId)> visit = [&](NodeId v) {
    colour[v] = 1;
    stack.push_back(v);
    for (const std::string& p : raw[v].parents) {
      const NodeId u = index[p];
      if (colour[u] == 1) {
        std::string text;
        for (auto it = std::find(stack.begin(), stack.end(), u); it != stack.end(); ++it) text += raw[*it].name + " <- ";
        throw ParseError(ParseCode::cycle, "cycle: " + text + raw[u].name);
      }
      if (colour[u] == 0) visit(u);
    }
    colour[v] = 2;
    stack.pop_back();
  };
  for (NodeId v = 0; v < static_cast<NodeId>(raw.size()); ++v)
    if (colour[v] == 0) visit(v);

  for (const RawVariable& r : raw) {
    std::size_t rows = 1;
    for (const std::string& p : r.parents) rows *= raw[index[p]].states.size();
    const std::size_t c = r.states.size();
    if (r.cpt.size() != rows * c)
      throw ParseError(ParseCode::cpt_length, "variable " + r.name + " has " + std::to_string(r.cpt.size()) +
                                                  " CPT entries, expected " + std::to_string(rows * c));
    for (double x : r.cpt)
      if (!(x >= 0.0 && x <= 1.0))
        throw ParseError(ParseCode::cpt_range, "variable " + r.name + " has CPT entry outside [0, 1]");
    for (std::size_t row = 0; row < rows; ++row) {
      double total = 0;
      for (std::size_t s = 0; s < c; ++s) total += r.cpt[row * c + s];
      if (std::abs(total - 1.0) > kRowTolerance)
        throw ParseError(ParseCode::row_sum, "variable " + r.name + " row " + std::to_string(row) + " sums to " +
                                                 format_double(total));
    }
  }

  const int n = static_cast<int>(raw.size());
  std::vector<Edge> edges;
  std::vector<int> cards(n);
  std::vector<std::string> names(n);
  std::vector<std::vector<std::string>> states(n);
  for (NodeId v = 0; v < n; ++v) {
    cards[v] = static_cast<int>(raw[v].states.size());
    names[v] = raw[v].name;
    states[v] = raw[v].states;
    for (const std::string& p : raw[v].parents) edges.emplace_back(index[p], v);
  }
  const Dag dag(n, edges);

  // Reorder each CPT from declared parent order to ascending id order.
  std::vector<std::vector<double>> cpts(n);
  for (NodeId v = 0; v < n; ++v) {
    const RawVariable& r = raw[v];
    const NodeSet& pa = dag.parents(v);
    std::vector<std::size_t> declared_stride(r.parents.size());
    std::size_t stride = 1;
    for (std::size_t k = r.parents.size(); k-- > 0;) {
      declared_stride[k] = stride;
      stride *= cards[index[r.parents[k]]];
    }
    const std::size_t rows = stride;
    const std::size_t c = cards[v];
    cpts[v].resize(rows * c);
    std::vector<int> config(pa.size(), 0);
    for (std::size_t row = 0; row < rows; ++row) {
      std::size_t src = 0;
      for (std::size_t k = 0; k < pa.size(); ++k) {
        const auto pos = std::find(r.parents.begin(), r.parents.end(), names[pa[k]]) - r.parents.begin();
        src += config[k] * declared_stride[pos];
      }
      std::copy_n(r.cpt.begin() + src * c, c, cpts[v].begin() + row * c);
      for (std::size_t k = pa.size(); k-- > 0;) {
        if (++config[k] < cards[pa[k]]) break;
        config[k] = 0;
      }
    }
  }
  return Network(dag, cards, std::move(cpts), names, states);
}

std::string serialize_network(const Network& bn) {
  std::vector<NodeId> order(bn.size());
  for (NodeId v = 0; v < bn.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return bn.name(a) < bn.name(b); });

  std::ostringstream out;
  out << "{\n  \"variables\": [";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeId v = order[i];
    std::vector<NodeId> parents = bn.parents(v);
    std::sort(parents.begin(), parents.end(), [&](NodeId a, NodeId b) { return bn.name(a) < bn.name(b); });
    out << (i ? ",\n" : "\n") << "    {\n";
    out << "      \"name\": " << json(bn.name(v)).dump() << ",\n";
    out << "      \"states\": [";
    for (std::size_t s = 0; s < bn.state_names(v).size(); ++s) out << (s ? ", " : "") << json(bn.state_names(v)[s]).dump();
    out << "],\n      \"parents\": [";
    for (std::size_t k = 0; k < parents.size(); ++k) out << (k ? ", " : "") << json(bn.name(parents[k])).dump();
    out << "],\n      \"cpt\": [";

    // Walk parent configurations in name order, last name least significant.
    const int c = bn.cardinality(v);
    std::vector<int> states(bn.size(), 0);
    std::size_t rows = 1;
    for (NodeId p : parents) rows *= bn.cardinality(p);
    for (std::size_t row = 0; row < rows; ++row) {
      const std::size_t base = bn.row_index(v, states) * c;
      out << (row ? ",\n        " : "\n        ");
      for (int s = 0; s < c; ++s) out << (s ? ", " : "") << format_probability(bn.cpt(v)[base + s]);
      for (std::size_t k = parents.size(); k-- > 0;) {
        if (++states[parents[k]] < bn.cardinality(parents[k])) break;
        states[parents[k]] = 0;
      }
    }
    out << "\n      ]\n    }";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

Network read_network_file(const std::string& path) { return parse_network(read_text_file(path)); }

void write_network_file(const std::string& path, const Network& bn) { write_text_file(path, serialize_network(bn)); }

Evidence parse_evidence(const Network& bn, std::string_view text) {
  Evidence e;
  if (text.empty()) return e;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw ArgumentError("evidence item '" + item + "' is not name=state");
    const std::string name = item.substr(0, eq), state = item.substr(eq + 1);
    const auto v = bn.find(name);
    if (!v) throw IdentifierError("unknown variable " + name);
    const auto s = bn.find_state(*v, state);
    if (!s) throw IdentifierError("unknown state '" + state + "' of variable " + name);
    if (!e.emplace(*v, *s).second) throw ArgumentError("variable " + name + " observed twice");
  }
  return e;
}

PartialRecord Dataset::record(std::size_t row, const std::vector<std::string>& skip) const {
  PartialRecord r;
  const auto& cells = rows.at(row);
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (std::find(skip.begin(), skip.end(), header[k]) != skip.end()) continue;
    if (cells[k]) r.observed[header[k]] = *cells[k];
    else r.missing.insert(header[k]);
  }
  return r;
}

Dataset parse_dataset(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError(ParseCode::schema, "dataset has no header", 1, 1);
  Dataset d;
  d.header = split(lines[0], ',');
  std::set<std::string> seen;
  for (std::size_t k = 0; k < d.header.size(); ++k) {
    if (d.header[k].empty()) throw ParseError(ParseCode::schema, "empty column name", 1, static_cast<int>(k + 1));
    if (!seen.insert(d.header[k]).second)
      throw ParseError(ParseCode::duplicate_variable, "duplicate column " + d.header[k], 1, static_cast<int>(k + 1));
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != d.header.size())
      throw ParseError(ParseCode::row_width,
                       "row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(d.header.size()),
                       static_cast<int>(i + 1), 1);
    std::vector<std::optional<std::string>> row;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k].empty())
        throw ParseError(ParseCode::syntax, "empty cell", static_cast<int>(i + 1), static_cast<int>(k + 1));
      if (cells[k] == "?") row.emplace_back(std::nullopt);
      else row.emplace_back(cells[k]);
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

std::string write_bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kBenchHeader) + "\n";
  for (const BenchRow& r : rows) {
    out += r.family + "," + std::to_string(r.n) + "," + std::to_string(r.categories) + "," +
           format_double(r.evidence_fraction) + "," + format_double(r.avg_mb_size) + "," + r.method + "," +
           std::to_string(r.budget) + "," + format_double(r.wall_time_ms) + "," + format_double(r.nrmse) + "," +
           std::to_string(r.repetitions) + "\n";
  }
  return out;
}

std::vector<BenchRow> parse_bench_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kBenchHeader)
    throw ParseError(ParseCode::schema, "benchmark CSV must start with the header " + std::string(kBenchHeader), 1, 1);
  std::vector<BenchRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    const int line = static_cast<int>(i + 1);
    if (cells.size() != 10) throw ParseError(ParseCode::row_width, "benchmark row needs 10 cells", line, 1);
    auto number = [&](std::size_t k) {
      try {
        std::size_t used = 0;
        const double x = std::stod(cells[k], &used);
        if (used != cells[k].size()) throw std::invalid_argument("trailing");
        return x;
      } catch (const std::exception&) {
        throw ParseError(ParseCode::syntax, "cell '" + cells[k] + "' is not a number", line, static_cast<int>(k + 1));
      }
    };
    BenchRow r;
    r.family = cells[0];
    r.n = static_cast<int>(number(1));
    r.categories = static_cast<int>(number(2));
    r.evidence_fraction = number(3);
    r.avg_mb_size = number(4);
    r.method = cells[5];
    r.budget = static_cast<std::size_t>(number(6));
    r.wall_time_ms = number(7);
    r.nrmse = number(8);
    r.repetitions = static_cast<int>(number(9));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GenSpec> parse_gen_specs(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError(ParseCode::syntax, "syntax error", line, column);
  }
  if (!doc.is_array()) schema("benchmark spec must be an array of objects");
  std::vector<GenSpec> out;
  for (const json& j : doc) {
    if (!j.is_object()) schema("benchmark spec must be an array of objects");
    GenSpec s;
    try {
      const std::string family = j.at("family").get<std::string>();
      const auto f = parse_family(family);
      if (!f) throw ParseError(ParseCode::unknown_value, "unknown family " + family);
      s.family = *f;
      s.n = j.at("n").get<int>();
      s.avg_mb_size = j.at("mb_size").get<double>();
      s.categories = j.at("categories").get<int>();
      s.evidence_fraction = j.at("evidence_fraction").get<double>();
      s.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("islands")) s.islands = j["islands"].get<int>();
      if (j.contains("rewire_prob")) s.rewire_prob = j["rewire_prob"].get<double>();
      if (j.contains("density")) s.density = j["density"].get<double>();
    } catch (const json::exception& e) {
      schema(std::string("benchmark spec: ") + e.what());
    }
    check_spec(s);
    out.push_back(s);
  }
  return out;
}

}  // namespace sgs
