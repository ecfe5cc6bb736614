#include "bubblecorr/integrals.hpp"
#include "bubblecorr/quadrature.hpp"
#include "support.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bc;
using namespace bc::testing;

namespace {

Polynomial mono(const MultiIndex& a, Rational c = 1) { return Polynomial::monomial(a, c); }

// Integral of r^{d+n-1} (1 + r^2)^{-n} over [0, inf) by double-exponential quadrature.
double radial_oracle(int n, int d) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double r) { 
    return r > 0.0 ? std::exp((d + n - 1) * std::log(r) - n * std::log1p(r * r)) : 0.0;
  });
}

// Integral of Q against (1 + |y|^2)^{-n}: radial oracle times the product-rule
// sphere integral of Q restricted to the unit sphere, which is exact at this
// node count.
double moment_oracle(const Polynomial& q) {
  const int n = q.dimension();
  const int d = *q.degree();
  const double angular =
      sphere_integral([&](const std::vector<double>& y) { return evaluate(q, y); }, std::vector<double>(n, 0.0), 1.0,
                      d / 2 + 2, Exec::serial);
  return radial_oracle(n, d) * angular;
}

}  // namespace

TEST_CASE("modified double factorial and laplacian constant") {
  CHECK(double_factorial_minus2(0) == 1);
  CHECK(double_factorial_minus2(2) == 1);
  CHECK(double_factorial_minus2(4) == 3);
  CHECK(double_factorial_minus2(6) == 15);
  CHECK(double_factorial_minus2(5) == 0);
  CHECK(b_constant(2) == 2);
  CHECK(b_constant(4) == 8);
  CHECK(b_constant(6) == 48);
  for (int h = 1; h <= 4; ++h) {
    MultiIndex a(6, 0);
    for (int i = 0; i < h; ++i) a[i] = 2;
    CHECK(iterated_laplacian(mono(a), h) == Polynomial::constant(6, Rational(b_constant(2 * h))));
  }
}

TEST_CASE("normalizing integral closed form against quadrature") {
  CHECK(j_value(3, 2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 4.0).epsilon(1e-14));
  for (int n = 2; n <= 10; ++n)
    for (int ell = 0; ell <= n - 1; ell += 2) {
      MultiIndex a(n, 0);
      for (int i = 0; i < ell / 2; ++i) a[i] = 2;
      const double oracle = radial_oracle(n, ell) * sphere_monomial_moment(a);
      CHECK(j_value(n, ell) > 0.0);
      CHECK(std::abs(j_value(n, ell) - oracle) <= 1e-8 * oracle);
      CHECK(std::abs(j_value(n, ell) - j_value_quadrature(n, ell)) <= 1e-8 * oracle);
    }
  CHECK_THROWS_AS(j_value(4, 4), DivergenceError);
}

TEST_CASE("moment integral by Monte Carlo") {
  // (1 + |y|^2)^{-n} normalized is the law of g / sqrt(chi2_n) with g standard normal.
  const int n = 6;
  const Polynomial q = mono({2, 0, 0, 0, 0, 0}) + mono({1, 1, 0, 0, 0, 0}, 2);
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  std::chi_squared_distribution<double> chi2(n);
  const std::size_t samples = 10'000'000;
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> y(n);
  for (std::size_t s = 0; s < samples; ++s) {
    const double scale = 1.0 / std::sqrt(chi2(rng));
    for (auto& v : y) v = normal(rng) * scale;
    const double f = evaluate(q, y);
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / samples;
  const double sigma = std::sqrt((sum2 / samples - mean * mean) / samples);
  const double mass = j_value(n, 0);
  const IntegralResult r = moment_integral(q);
  CHECK(r.j_multiple == 1);
  CHECK(std::abs(r.numeric - mass * mean) <= 3.0 * mass * sigma);
}

TEST_CASE("moment integral examples") {
  CHECK(moment_integral(mono({1, 0, 0})).j_multiple == 0);
  CHECK(moment_integral(mono({1, 0, 0})).numeric == 0.0);
  CHECK(moment_integral(mono({2, 0, 0}) - mono({0, 2, 0})).j_multiple == 0);
  for (int n = 5; n <= 8; ++n) {
    MultiIndex a(n, 0);
    a[0] = a[1] = 2;
    const IntegralResult r = moment_integral(mono(a));
    CHECK(r.j_multiple == 1);
    CHECK(j_multiple_by_laplacian(mono(a)) == 1);
    CHECK(r.numeric == doctest::Approx(j_value(n, 4)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(moment_integral(mono({3, 1, 0, 0})), DivergenceError);
  CHECK_NOTHROW(moment_integral(mono({2, 1, 0, 0})));
}

TEST_CASE("monomial and laplacian routes agree exactly") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 7;
    const int ell = 2 * (1 + trial % std::max(1, (n - 1) / 2));
    const Polynomial q = random_homogeneous(n, std::min(ell, n - 1 - (n - 1) % 2), rng, 6);
    CHECK(j_multiple_by_monomials(q) == j_multiple_by_laplacian(q));
  }
}

TEST_CASE("closed form agrees with quadrature") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 3 + trial % 6;
    std::uniform_int_distribution<int> deg(1, n - 1);
    const int d = deg(rng);
    Polynomial q = random_homogeneous(n, d, rng, 5);
    if (d % 2 == 0) {
      // make the integral clearly nonzero
      MultiIndex a(n, 0);
      for (int i = 0; i < d / 2; ++i) a[i] = 2;
      q += mono(a, 5);
    }
    const IntegralResult closed = moment_integral(q);
    const IntegralResult quad = moment_integral(q, IntegralMethod::quadrature);
    const double oracle = moment_oracle(q);
    const double scale = std::max(std::abs(oracle), j_value(n, d % 2 == 0 ? d : d - 1));
    CHECK(std::abs(closed.numeric - oracle) <= 1e-6 * scale);
    CHECK(std::abs(quad.numeric - oracle) <= 1e-6 * scale);
    CHECK(closed.j_multiple == quad.j_multiple);
  }
}

TEST_CASE("moment vanishes exactly when the top laplacian does") {
  std::mt19937_64 rng(1001);
  int zeros = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial % 4;
    const int ell = trial % 3 == 0 ? 2 : 4;
    const Polynomial q = trial % 2 == 0 ? random_homogeneous(n, ell, rng, 4) : random_admissible(n, ell, rng);
    const bool vanishes = iterated_laplacian(q, ell / 2).is_zero();
    CHECK((moment_integral(q).j_multiple == 0) == vanishes);
    zeros += vanishes;
  }
  CHECK(zeros > 0);
  CHECK(zeros < 30);
}

TEST_CASE("reduction and laplacian identities over small ranges") {
  int checked = 0;
  for (int k = 2; k <= 6; k += 2)
    for (int a2 = 0; a2 <= 4; a2 += 2)
      for (int a3 = 0; a2 + a3 <= 4; a3 += 2) {
        const int n = k + 2 + a2 + a3 + 1;
        MultiIndex alpha(std::max(n, 4), 0);
        alpha[1] = a2;
        alpha[2] = a3;
        const int dim = static_cast<int>(alpha.size());
        CHECK(reduction_identity_check(dim, k, alpha));
        CHECK(laplacian_identity_check(dim, k, alpha));
        ++checked;
      }
  CHECK(checked == 18);
  MultiIndex zero6(6, 0);
  CHECK(reduction_identity_check(6, 2, zero6));
  CHECK(j_multiple_by_monomials(mono({4, 0, 0, 0, 0, 0})) == 3);
  CHECK(iterated_laplacian(mono({4, 0, 0, 0}), 2) == Polynomial::constant(4, 24));
  CHECK(iterated_laplacian(mono({2, 0, 0, 2}), 2) == Polynomial::constant(4, 8));
  CHECK_THROWS_AS(reduction_identity_check(6, 3, zero6), PreconditionError);
}

TEST_CASE("iterated laplacian of even monomials is the double factorial product times B") {
  std::mt19937_64 rng(1102);
  std::uniform_int_distribution<int> half(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    MultiIndex a(n, 0);
    int total = 0;
    while (total == 0) {
      for (auto& v : a) v = 2 * half(rng);
      total = total_degree(a);
    }
    Integer prod = 1;
    for (int v : a) prod *= double_factorial_minus2(v);
    CHECK(iterated_laplacian(mono(a), total / 2) == Polynomial::constant(n, Rational(prod * b_constant(total))));
  }
}

TEST_CASE("shift expansion reconstructs the shifted polynomial") {
  const ShiftExpansion e1 = shift_expansion(mono({2}));
  const BoundShift b1 = bind_shift(e1, {Rational(3)});
  CHECK(b1.base == mono({2}));
  REQUIRE(b1.xi_terms.size() == 1);
  CHECK(b1.xi_terms[0] == mono({1}, 6));
  CHECK(b1.constant == 9);

  std::mt19937_64 rng(1203);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const int ell = 2 + trial % 4;
    const Polynomial q = random_homogeneous(n, ell, rng, 4);
    std::vector<Rational> xi(n);
    for (auto& v : xi) v = random_rational(rng);
    const ShiftExpansion e = shift_expansion(q);
    CHECK(e.xi_terms.size() == static_cast<std::size_t>(ell - 1));
    const BoundShift b = bind_shift(e, xi);
    Polynomial sum = b.base + Polynomial::constant(n, b.constant);
    for (const auto& t : b.xi_terms) sum += t;
    CHECK(sum == translate(q, xi));
  }
}

TEST_CASE("change of center breakdown") {
  const int n = 6;
  const Polynomial q = mono({2, 0, 0, 0, 0, 0}) + mono({1, 1, 0, 0, 0, 0}, 3) - mono({0, 0, 2, 0, 0, 0}, 2);
  const ChangeOfCenter at_zero = change_of_center(q, std::vector<double>(n, 0.0), 0.1, 1.0, 128, 8);
  CHECK(at_zero.shift_group == 0.0);
  CHECK(at_zero.constant_group == 0.0);
  CHECK(at_zero.base_group == doctest::Approx(std::pow(0.1, 2) * moment_integral(q).numeric).epsilon(1e-14));
  const Polynomial odd = mono({3, 0, 0, 0, 0, 0}) + mono({1, 2, 0, 0, 0, 0});
  CHECK(change_of_center(odd, std::vector<double>(n, 0.0), 0.1, 1.0, 128, 8).base_group == 0.0);

  // xi = lambda X: the breakdown is exact on R^n, so the only gap is the tail
  // outside the ball, which decays like lambda^{n+2} relative to the
  // lambda^ell prefactor.
  std::vector<double> lambdas{0.1, 0.05, 0.025}, gaps;
  for (double lambda : lambdas) {
    std::vector<double> xi(n, 0.0);
    xi[0] = 0.5 * lambda;
    xi[1] = -0.25 * lambda;
    const ChangeOfCenter c = change_of_center(q, xi, lambda, 1.0, 128, 8);
    gaps.push_back(std::abs(c.breakdown_sum - c.quadrature));
  }
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    const double slope = std::log(gaps[i] / gaps[i + 1]) / std::log(lambdas[i] / lambdas[i + 1]);
    CHECK(slope >= 2 + 1 - 0.2);
  }
  CHECK_THROWS_AS(change_of_center(mono({5, 0, 0, 0, 0, 0}), std::vector<double>(n, 0.0), 0.1, 1.0),
                  DivergenceError);
}

TEST_CASE("gradient moment of a separable even polynomial") {
  const Polynomial p = mono({4, 0, 0, 0, 0, 0, 0, 0}) - mono({0, 4, 0, 0, 0, 0, 0, 0});
  const GradientMoment at_zero = gradient_moment(p, std::vector<Rational>(8, 0));
  for (double v : at_zero.values) CHECK(v == 0.0);
  std::vector<Rational> x(8, 0);
  x[0] = make_rational(1, 2);
  const GradientMoment g = gradient_moment(p, x);
  CHECK(g.values[0] != 0.0);
  for (int i = 1; i < 8; ++i) CHECK(g.values[i] == 0.0);

  // central difference of the shifted moment in X_1
  const double h = 1e-3;
  auto shifted = [&](double s) {
    std::vector<Rational> shift(8, 0);
    shift[0] = rational_from_double(s);
    return mixed_moment(translate(p, shift)).numeric;
  };
  const double fd = (shifted(0.5 + h) - shifted(0.5 - h)) / (2 * h);
  CHECK(std::abs(fd - g.values[0]) <= 1e-5 * std::max(1.0, std::abs(g.values[0])));
}
