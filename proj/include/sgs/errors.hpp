#ifndef SGS_ERRORS_HPP
#define SGS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgs {

enum class ErrorKind {
  identifier,   // unknown node id or name
  structure,    // cycle, self-loop, duplicate edge
  argument,     // malformed call arguments
  capacity,     // table or enumeration size limit exceeded
  parse,        // malformed input document
  domain,       // mathematically undefined request (e.g. NRMSE with zero truth)
  consistency,  // internal invariant broken; indicates a bug
  classification,
  io,           // file cannot be read or written
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IdentifierError : public Error {
 public:
  explicit IdentifierError(const std::string& m) : Error(ErrorKind::identifier, m) {}
};

class StructureError : public Error {
 public:
  explicit StructureError(const std::string& m) : Error(ErrorKind::structure, m) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& m) : Error(ErrorKind::argument, m) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& m) : Error(ErrorKind::capacity, m) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorKind::domain, m) {}
};

class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& m) : Error(ErrorKind::consistency, m) {}
};

class ClassificationError : public Error {
 public:
  explicit ClassificationError(const std::string& m) : Error(ErrorKind::classification, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

}  // namespace sgs

#endif  // SGS_ERRORS_HPP
