#ifndef SGS_IO_HPP
#define SGS_IO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgs/classify.hpp"
#include "sgs/errors.hpp"
#include "sgs/netgen.hpp"
#include "sgs/network.hpp"

namespace sgs {

enum class ParseCode {
  syntax,
  schema,
  empty_network,
  duplicate_variable,
  duplicate_state,
  too_few_states,
  unresolved_parent,
  self_parent,
  duplicate_parent,
  cpt_length,
  cpt_range,
  row_sum,
  cycle,
  row_width,
  unknown_value,
};

std::string_view to_string(ParseCode code) noexcept;

/// Malformed document. line and column are 1-based when known, 0 otherwise.
class ParseError : public Error {
 public:
  ParseError(ParseCode code, const std::string& message, int line = 0, int column = 0);

  ParseCode code() const noexcept { return code_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  ParseCode code_;
  int line_;
  int column_;
};

/// Network document:
///   {"variables": [{"name": "A", "states": ["no", "yes"],
///                   "parents": ["B"], "cpt": [...]}, ...]}
/// CPT rows run over parent configurations in declared parent order, last
/// parent least significant; within a row, one entry per state. Variables
/// get ids in file order. Rows must sum to 1 within 1e-6.
Network parse_network(std::string_view text);

/// Canonical text: variables and parent lists sorted by name, CPTs
/// permuted to match, numbers rounded to 12 decimals.
std::string serialize_network(const Network& bn);

Network read_network_file(const std::string& path);
void write_network_file(const std::string& path, const Network& bn);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// "name=state,name=state" against a network; empty text is empty evidence.
/// Throws IdentifierError for unknown names or states and ArgumentError for
/// malformed or repeated entries.
Evidence parse_evidence(const Network& bn, std::string_view text);

/// Comma-separated records: a header of variable names, then one state name
/// per cell, "?" for missing.
struct Dataset {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<std::string>>> rows;

  /// Row as a record, skipping the named columns.
  PartialRecord record(std::size_t row, const std::vector<std::string>& skip = {}) const;
};

Dataset parse_dataset(std::string_view text);

/// Benchmark rows with the fixed header; doubles printed round-trip exact.
std::string write_bench_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_bench_csv(std::string_view text);

/// Benchmark specs: a JSON array of objects with keys family, n, mb_size,
/// categories, evidence_fraction, seed and optionally islands,
/// rewire_prob, density.
std::vector<GenSpec> parse_gen_specs(std::string_view text);

}  // namespace sgs

#endif  // SGS_IO_HPP
