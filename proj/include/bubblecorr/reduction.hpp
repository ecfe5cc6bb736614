#pragma once

#include "bubblecorr/polynomial.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bc {

// A cell of the coefficient table whose characteristic denominator vanishes.
class GuardError : public std::runtime_error {
 public:
  GuardError(int n, int ell, int j, int k, std::string root);
  int j, k;
  // "j = n/2" or "j = (ell-1) - 2(k-j)"
  std::string root;
};

// The leftover radial terms that prevent a solution built from the table.
class ResidueObstruction : public std::runtime_error {
 public:
  explicit ResidueObstruction(Polynomial residue);
  Polynomial residue;
};

class UnsolvableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Cell = std::pair<int, int>;  // (j, k)

struct CellStep {
  Cell cell;
  std::vector<Cell> deps;
};

struct CoefficientTable {
  int n = 0;
  int ell = 0;
  int h = 0;
  // Columns k = 0 .. depth-1 are populated.
  int depth = 0;
  std::map<Cell, Rational> C;
  std::map<Cell, Rational> A;
  std::map<Cell, Rational> denominator;
  std::vector<CellStep> order;
  // [a_0, ..., a_h]; present only when depth == h.
  std::vector<Rational> residues;

  const Rational& coefficient(int j, int k) const { return C.at({j, k}); }
};

int h_of(int ell);
Rational a_multiplier(int n, int ell, int j, int k);
// A_{ell,j,k} - 2n(ell + 2(j-k) - 1)
Rational characteristic_denominator(int n, int ell, int j, int k);
bool characteristic_guard(int n, int ell, int j, int k);

// Dependency-ordered build: diagonal cells first, then each column k from
// j = k-1 up to the top row.
std::vector<CellStep> table_build_order(int depth);

CoefficientTable coefficient_table(int n, int ell);
CoefficientTable coefficient_table(int n, int ell, int depth);

// (1 + R^2) Delta G - 2n (Y . grad G) + 2n G
Polynomial apply_L(const Polynomial& g);

// Smallest k with Delta^k P == 0.
int vanishing_order(const Polynomial& p);

// Sum over the table of C^j_k (R^2)^j Delta^k P.
Polynomial assemble_from_table(const CoefficientTable& table, const Polynomial& p);

Polynomial residue_terms(const Polynomial& p);

struct CorrectionSolution {
  Polynomial gamma;
  std::optional<Polynomial> radial_completion;
  int vanishing_order = 0;
  bool verified = false;
  // False once a radial completion is added.
  bool unique_mod_kernel = true;
  int n = 0;
  int ell = 0;

  Polynomial total() const;
};

CorrectionSolution solve_gamma(const Polynomial& p);

// residue_coefficients[m] is the coefficient of (R^2)^m in the residue.
Polynomial radial_completion(int n, int ell, const std::vector<Rational>& residue_coefficients);

CorrectionSolution solve_general(const Polynomial& p);

Polynomial project_to_admissible(const Polynomial& p);

// {y_1, ..., y_n, R^2 - 1}
std::vector<Polynomial> kernel_basis(int n);

// Coefficients of D in kernel_basis order, or nullopt when D is outside the span.
std::optional<std::vector<Rational>> kernel_decomposition(const Polynomial& d);

}  // namespace bc
