#pragma once

#include <stdexcept>
#include <string>

namespace hatlas {

/// Malformed polynomial text. `column` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int column)
      : std::runtime_error(what + " at column " + std::to_string(column)), column_(column) {}
  int column() const noexcept { return column_; }

 private:
  int column_;
};

/// The input violates a genericity requirement (repeated factors, singular
/// curve, degenerate folded singularity, ...).
class NonGenericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not reach a decision.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hatlas
