#pragma once

#include "bubblecorr/polynomial.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bc {

class DivergenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class IntegralMethod { closed_form, quadrature };
std::string to_string(IntegralMethod m);

// Integral of Q against (1 + |y|^2)^{-n} over R^n, reported as an exact
// multiple of J(n, deg Q).
struct IntegralResult {
  Rational j_multiple;
  double numeric = 0.0;
  double j = 0.0;
  IntegralMethod method = IntegralMethod::closed_form;
};

// 1 for m in {0, 2}; 0 for odd m; (m-1)(m-3)...3*1 for even m >= 4.
Integer double_factorial_minus2(int m);

// ell (ell-2) ... 2 for even ell >= 2.
Integer b_constant(int ell);

// J = integral of y_1^2 ... y_h^2 (1 + |y|^2)^{-n}, h = ell/2, evaluated as
// pi^{n/2} 2^{-h} Gamma(n/2 - h) / Gamma(n). Requires even ell <= n - 1.
double j_value(int n, int ell);

// Same integral by Gauss-Legendre radial quadrature times the exact sphere moment.
double j_value_quadrature(int n, int ell);

// Integral over S^{n-1} of prod theta_i^{alpha_i}.
double sphere_monomial_moment(const MultiIndex& alpha);

// Integral over [0, inf) of r^{d+n-1} (1 + r^2)^{-n}, via r = tan(theta) and
// 256-point Gauss-Legendre.
double radial_moment(int n, int d);

// Sum over monomials of coefficient times prod (alpha_i)!_{-2}.
Rational j_multiple_by_monomials(const Polynomial& q);
// Delta^h Q / B for even degree, zero for odd degree.
Rational j_multiple_by_laplacian(const Polynomial& q);

IntegralResult moment_integral(const Polynomial& q,
                               IntegralMethod method = IntegralMethod::closed_form);

// Moment of a polynomial that need not be homogeneous: exact multiples per
// degree plus the summed numeric value.
struct MixedMoment {
  std::map<int, Rational> multiples;
  double numeric = 0.0;
};
MixedMoment mixed_moment(const Polynomial& q);

// Component i is the moment of (dP/dy_i)(y + X).
struct GradientMoment {
  std::vector<MixedMoment> components;
  std::vector<double> values;
};
GradientMoment gradient_moment(const Polynomial& p, const std::vector<Rational>& x);

// Q(xi + z) = base(z) + sum_h xi_terms[h-1](xi, z) + constant(xi). All parts
// live in 2n variables: slots 0..n-1 hold xi, slots n..2n-1 hold z.
struct ShiftExpansion {
  int n = 0;
  Polynomial base;
  std::vector<Polynomial> xi_terms;
  Polynomial constant;
};
ShiftExpansion shift_expansion(const Polynomial& q);

// The same parts with xi bound to a point, as polynomials in z.
struct BoundShift {
  Polynomial base;
  std::vector<Polynomial> xi_terms;
  Rational constant;
};
BoundShift bind_shift(const ShiftExpansion& e, const std::vector<Rational>& xi);

struct ChangeOfCenter {
  int ell = 0;
  // Each group carries the prefactor lambda^ell.
  double base_group = 0.0;
  std::vector<double> shift_terms;  // h = 1 .. ell-1
  double shift_group = 0.0;
  double constant_group = 0.0;
  double breakdown_sum = 0.0;
  // Integral of Q(y) [A_{lambda,xi}(y)]^{2n/(n-2)} over |y| < rho.
  double quadrature = 0.0;
};
ChangeOfCenter change_of_center(const Polynomial& q, const std::vector<double>& xi, double lambda,
                                double rho, int radial_points = 256, int polar_points = 0);

// Integral of y_1^{k+2} M equals (k+1) times that of y_1^k y_n^2 M, compared
// as exact multiples of J. alpha must vanish in slots 1 and n.
bool reduction_identity_check(int n, int k, const MultiIndex& alpha);

// Delta^h {y_1^{k+2} M} = (k+1) Delta^h {y_1^k y_n^2 M} as exact polynomials.
bool laplacian_identity_check(int n, int k, const MultiIndex& alpha);

}  // namespace bc
