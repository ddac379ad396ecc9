#pragma once

// The four benchmark systems, stored verbatim with their reference data.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "realrad/parse.hpp"

namespace realrad {

struct BuiltinExample {
  std::string name;
  std::string system;
  std::size_t nvars;
  unsigned degree;
  std::vector<Eigen::Index> face_sizes;  // reference face-size sequence
  Eigen::Index rank;                     // reference maximum rank
  std::vector<std::string> radical;      // reference generators of the real radical

  std::vector<Polynomial> polynomials() const { return parse_system(system, nvars); }
};

inline const std::vector<BuiltinExample>& builtin_examples() {
  static const std::vector<BuiltinExample> all = {
      {"Ex1", "(x+y)*(x^2+y^2+2)", 2, 3, {10, 9, 4}, 4, {"x + y"}},
      {"Ex2", "(1+x+y)*(x^4+y^4+2)", 2, 5, {21, 20, 6}, 6, {"1 + x + y"}},
      {"Ex3", "1 + (x+y) + (x+y)^2 + (x+y)^3", 2, 3, {10, 9, 7, 4}, 4, {"1 + x + y"}},
      {"Ex4",
       "2*y*z - y; 2*y^2 + y; x*y; 4*x^2*z + 4*z^3 + y",
       3,
       3,
       {20, 16, 14, 8},
       8,
       {"z^2 + 0.5*y", "y*z - 0.5*y", "y^2 + 0.5*y", "x*z", "x*y", "y + z"}},
  };
  return all;
}

}  // namespace realrad
