#include "sgs/errors.hpp"

namespace sgs {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::identifier: return "identifier";
    case ErrorKind::structure: return "structure";
    case ErrorKind::argument: return "argument";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::parse: return "parse";
    case ErrorKind::domain: return "domain";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::classification: return "classification";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace sgs
