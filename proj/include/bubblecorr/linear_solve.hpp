#pragma once

#include "bubblecorr/rational.hpp"

#include <optional>
#include <vector>

namespace bc {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct LinearSolveResult {
  // A particular solution with free variables set to zero, when consistent.
  std::optional<std::vector<Rational>> solution;
  int rank = 0;
};

// Exact Gauss-Jordan elimination; tolerates rank deficiency and
// inconsistent systems.
LinearSolveResult solve_exact(RationalMatrix a, std::vector<Rational> b);

}  // namespace bc
