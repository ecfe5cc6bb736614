#pragma once

#include "bubblecorr/linear_solve.hpp"
#include "bubblecorr/polynomial.hpp"
#include "bubblecorr/reduction.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <random>
#include <vector>

namespace bc::testing {

inline Rational random_rational(std::mt19937_64& rng, int range = 6) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, range);
  int a = 0;
  while (a == 0) a = num(rng);
  return make_rational(a, den(rng));
}

inline MultiIndex random_exponents(int n, int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> slot(0, n - 1);
  MultiIndex alpha(n, 0);
  for (int d = 0; d < degree; ++d) ++alpha[slot(rng)];
  return alpha;
}

inline Polynomial random_homogeneous(int n, int degree, std::mt19937_64& rng, int terms = 6) {
  Polynomial p(n);
  while (p.is_zero())
    for (int t = 0; t < terms; ++t) p.add_term(random_exponents(n, degree, rng), random_rational(rng));
  return p;
}

inline Polynomial random_polynomial(int n, int max_degree, std::mt19937_64& rng, int terms = 6) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  Polynomial p(n);
  for (int t = 0; t < terms; ++t) p.add_term(random_exponents(n, deg(rng), rng), random_rational(rng));
  return p;
}

// Real or imaginary part of (y_a + i y_b)^m.
inline Polynomial complex_power(int n, int a, int b, int m, bool imaginary) {
  Polynomial p(n);
  Integer binom = 1;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * (m - k + 1) / k;
    if ((k % 2 == 1) == imaginary) {
      const int sign = ((imaginary ? k - 1 : k) / 2) % 2 == 0 ? 1 : -1;
      MultiIndex alpha(n, 0);
      alpha[a] = m - k;
      alpha[b] = k;
      p.add_term(alpha, Rational(binom * sign));
    }
  }
  return p;
}

// Sums of products of harmonic factors in disjoint variables: a complex power
// in two variables times a multilinear monomial in others.
inline Polynomial random_harmonic(int n, int degree, std::mt19937_64& rng, int terms = 3) {
  Polynomial p(n);
  while (p.is_zero()) {
    for (int t = 0; t < terms; ++t) {
      std::vector<int> vars(n);
      for (int i = 0; i < n; ++i) vars[i] = i;
      std::shuffle(vars.begin(), vars.end(), rng);
      const int max_linear = std::min(n - 2, degree - 1);
      std::uniform_int_distribution<int> lin(0, max_linear);
      const int r = lin(rng);
      const int m = degree - r;
      std::bernoulli_distribution coin(0.5);
      Polynomial term = complex_power(n, vars[0], vars[1], m, coin(rng));
      for (int i = 0; i < r; ++i) term = term * Polynomial::variable(n, vars[2 + i]);
      p += term * random_rational(rng);
    }
  }
  return p;
}

// Sum over pairs of y_{2j-1}^ell - y_{2j}^ell (n even).
inline Polynomial paired_power_difference(int n, int ell) {
  Polynomial p(n);
  for (int j = 0; j + 1 < n; j += 2) {
    MultiIndex a(n, 0), b(n, 0);
    a[j] = ell;
    b[j + 1] = ell;
    p.add_term(a, 1);
    p.add_term(b, -1);
  }
  return p;
}

// Homogeneous P with the top iterated Laplacian vanishing.
inline Polynomial random_admissible(int n, int degree, std::mt19937_64& rng) {
  Polynomial p(n);
  while (p.is_zero()) p = project_to_admissible(random_homogeneous(n, degree, rng));
  return p;
}

// Independent solvability oracle: is P in the image of apply_L restricted to
// span{(R^2)^j Delta^k P : 0 <= j <= k <= h}? Decided by exact elimination.
inline bool solvable_in_span(const Polynomial& p) {
  const int h = *p.degree() / 2;
  std::vector<Polynomial> images;
  Polynomial dk = p;
  for (int k = 0; k <= h; ++k) {
    for (int j = 0; j <= k; ++j) images.push_back(apply_L(r2_multiply(dk, j)));
    dk = laplacian(dk);
  }
  std::set<MultiIndex, GrevlexLess> monomials;
  for (const auto& [alpha, c] : p.terms()) monomials.insert(alpha);
  for (const auto& img : images)
    for (const auto& [alpha, c] : img.terms()) monomials.insert(alpha);
  RationalMatrix a;
  std::vector<Rational> b;
  for (const auto& alpha : monomials) {
    std::vector<Rational> row;
    for (const auto& img : images) row.push_back(img.coefficient(alpha));
    a.push_back(std::move(row));
    b.push_back(p.coefficient(alpha));
  }
  return solve_exact(std::move(a), std::move(b)).solution.has_value();
}

using ScalarFn = std::function<double(const std::vector<double>&)>;

// Sixth-order central second difference summed over coordinates.
inline double fd_laplacian(const ScalarFn& f, std::vector<double> y, double h) {
  static const double c[] = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  double s = 0.0;
  const double f0 = f(y);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    double acc = c[0] * f0;
    for (int k = 1; k <= 3; ++k) {
      y[i] = yi + k * h;
      const double fp = f(y);
      y[i] = yi - k * h;
      const double fm = f(y);
      acc += c[k] * (fp + fm);
    }
    y[i] = yi;
    s += acc / (h * h);
  }
  return s;
}

// Sixth-order central first difference.
inline std::vector<double> fd_gradient(const ScalarFn& f, std::vector<double> y, double h) {
  static const double c[] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  std::vector<double> g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    double acc = 0.0;
    for (int k = 1; k <= 3; ++k) {
      y[i] = yi + k * h;
      const double fp = f(y);
      y[i] = yi - k * h;
      const double fm = f(y);
      acc += c[k - 1] * (fp - fm);
    }
    y[i] = yi;
    g[i] = acc / h;
  }
  return g;
}

inline std::vector<double> random_point(int n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> y(n);
  for (auto& v : y) v = u(rng);
  return y;
}

}  // namespace bc::testing
