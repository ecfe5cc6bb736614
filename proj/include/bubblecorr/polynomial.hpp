#pragma once

#include "bubblecorr/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bc {

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& alpha);

// Graded reverse lexicographic order: lower total degree first; on ties the
// index with the larger exponent in the last differing slot sorts first.
struct GrevlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(int a, int b);
};

class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational, GrevlexLess>;

  explicit Polynomial(int dimension);

  static Polynomial constant(int dimension, const Rational& c);
  static Polynomial monomial(const MultiIndex& alpha, const Rational& c = 1);
  static Polynomial variable(int dimension, int i);
  // y_1^2 + ... + y_n^2
  static Polynomial r2(int dimension);

  int dimension() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // nullopt for the zero polynomial.
  std::optional<int> degree() const;
  std::optional<int> min_degree() const;
  bool is_homogeneous() const;
  Rational coefficient(const MultiIndex& alpha) const;

  // Adds c to the coefficient of alpha, dropping the term if it cancels.
  void add_term(const MultiIndex& alpha, const Rational& c);

  // Terms of total degree d.
  Polynomial homogeneous_part(int d) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void check_alpha(const MultiIndex& alpha) const;

  int dim_;
  TermMap terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a);
Polynomial operator*(Polynomial a, const Rational& c);
Polynomial operator*(const Rational& c, Polynomial a);
Polynomial operator*(const Polynomial& a, const Polynomial& b);

Polynomial partial(const Polynomial& p, int i);
Polynomial laplacian(const Polynomial& p);
Polynomial iterated_laplacian(const Polynomial& p, int k);
// Y . grad P
Polynomial euler_operator(const Polynomial& p);
std::vector<Polynomial> gradient(const Polynomial& p);
// (y_1^2 + ... + y_n^2)^j * P
Polynomial r2_multiply(const Polynomial& p, int j);
// <X, grad P>
Polynomial directional_pairing(const std::vector<Rational>& x, const Polynomial& p);

Rational evaluate(const Polynomial& p, const std::vector<Rational>& point);
// Each monomial is evaluated as coefficient (rounded to double) times a
// product of repeated multiplications; terms are summed in grevlex order.
double evaluate(const Polynomial& p, const std::vector<double>& point);

// P(y + shift) expanded exactly.
Polynomial translate(const Polynomial& p, const std::vector<Rational>& shift);

// Substitutes y_i -> sign_i * y_{perm_i}; used for signed-permutation
// symmetry checks.
Polynomial signed_permute(const Polynomial& p, const std::vector<int>& perm,
                          const std::vector<int>& signs);

// Embeds P(z) into dimension total, with z occupying slots offset..offset+n-1.
Polynomial embed(const Polynomial& p, int total, int offset);

// Treats P as a polynomial in (x, z) with x the first x.size() variables,
// substitutes x and returns the polynomial in z.
Polynomial bind_leading(const Polynomial& p, const std::vector<Rational>& x);

std::string to_string(const Polynomial& p);

}  // namespace bc
