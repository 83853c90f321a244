#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nlsmass {

enum class ErrorKind {
  Validation,
  Domain,
  BelowFirstEigenvalue,
  Evaluation,
  Integration,
  Numeric,
  Ambiguity,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Process exit status used by the command line tool for each error kind.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when the shooting map a -> first-zero radius has more than one
// admissible bracket, i.e. the positive solution may not be unique.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what,
                 std::vector<std::pair<double, double>> brackets)
      : Error(ErrorKind::Ambiguity, what), brackets_(std::move(brackets)) {}

  const std::vector<std::pair<double, double>>& brackets() const noexcept {
    return brackets_;
  }

 private:
  std::vector<std::pair<double, double>> brackets_;
};

}  // namespace nlsmass
