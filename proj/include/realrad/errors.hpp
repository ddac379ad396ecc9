#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace realrad {

/// Malformed polynomial text. `position` is the 0-based byte offset.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A numerical stage failed (pseudoinverse breakdown, face collapse,
/// reduced problem not strictly feasible, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace realrad
