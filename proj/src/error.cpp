#include "nlsmass/error.hpp"

namespace nlsmass {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::BelowFirstEigenvalue: return "below_first_eigenvalue";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Integration: return "integration";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Ambiguity: return "ambiguity";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Validation:
    case ErrorKind::Io:
    case ErrorKind::Domain:
    case ErrorKind::BelowFirstEigenvalue:
      return 1;
    case ErrorKind::Ambiguity:
      return 3;
    default:
      return 2;
  }
}

}  // namespace nlsmass
