#include "bubblecorr/integrals.hpp"

#include "bubblecorr/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace bc {

std::string to_string(IntegralMethod m) {
  return m == IntegralMethod::closed_form ? "closed_form" : "quadrature";
}

Integer double_factorial_minus2(int m) {
  if (m < 0) throw PreconditionError("double_factorial_minus2: m must be non-negative");
  if (m % 2 == 1) return 0;
  Integer out = 1;
  for (int f = m - 1; f >= 3; f -= 2) out *= f;
  return out;
}

Integer b_constant(int ell) {
  if (ell < 0 || ell % 2 != 0) throw PreconditionError("b_constant: ell must be even");
  Integer out = 1;
  for (int f = ell; f >= 2; f -= 2) out *= f;
  return out;
}

namespace {

void check_convergent_degree(int n, int d) {
  if (d > n - 1)
    throw DivergenceError("moment of degree " + std::to_string(d) + " diverges in dimension " +
                          std::to_string(n) + " (degree must be at most n - 1)");
}

double j_closed_form(int n, int ell) {
  const int h = ell / 2;
  const double log_j = 0.5 * n * std::log(std::numbers::pi) - h * std::log(2.0) +
                       std::lgamma(0.5 * n - h) - std::lgamma(static_cast<double>(n));
  return std::exp(log_j);
}

}  // namespace

double j_value(int n, int ell) {
  if (ell < 0 || ell % 2 != 0) throw PreconditionError("j_value: ell must be even");
  check_convergent_degree(n, ell);
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace({n, ell}, 0.0);
  if (inserted) it->second = j_closed_form(n, ell);
  return it->second;
}

double sphere_monomial_moment(const MultiIndex& alpha) {
  const int n = static_cast<int>(alpha.size());
  double log_num = 0.0;
  for (int a : alpha) {
    if (a % 2 != 0) return 0.0;
    log_num += std::lgamma(0.5 * (a + 1));
  }
  return 2.0 * std::exp(log_num - std::lgamma(0.5 * (total_degree(alpha) + n)));
}

double radial_moment(int n, int d) {
  check_convergent_degree(n, d);
  // r = tan(t): r^{d+n-1} (1+r^2)^{-n} dr = sin^{d+n-1}(t) cos^{n-1-d}(t) dt
  return gauss_integrate(
      [n, d](double t) { return std::pow(std::sin(t), d + n - 1) * std::pow(std::cos(t), n - 1 - d); },
      0.0, 0.5 * std::numbers::pi, 256);
}

double j_value_quadrature(int n, int ell) {
  if (ell < 0 || ell % 2 != 0) throw PreconditionError("j_value_quadrature: ell must be even");
  MultiIndex alpha(n, 0);
  for (int i = 0; i < ell / 2; ++i) alpha.at(i) = 2;
  return radial_moment(n, ell) * sphere_monomial_moment(alpha);
}

Rational j_multiple_by_monomials(const Polynomial& q) {
  Rational sum = 0;
  for (const auto& [alpha, c] : q.terms()) {
    Integer prod = 1;
    for (int a : alpha) {
      prod *= double_factorial_minus2(a);
      if (prod == 0) break;
    }
    sum += c * Rational(prod);
  }
  return sum;
}

Rational j_multiple_by_laplacian(const Polynomial& q) {
  if (q.is_zero()) return 0;
  if (!q.is_homogeneous()) throw PreconditionError("j_multiple_by_laplacian: Q must be homogeneous");
  const int ell = *q.degree();
  if (ell % 2 != 0) return 0;
  const Polynomial dh = iterated_laplacian(q, ell / 2);
  return dh.coefficient(MultiIndex(q.dimension(), 0)) / Rational(b_constant(ell));
}

IntegralResult moment_integral(const Polynomial& q, IntegralMethod method) {
  IntegralResult r;
  r.method = method;
  if (q.is_zero()) return r;
  if (!q.is_homogeneous()) throw PreconditionError("moment_integral: Q must be homogeneous");
  const int n = q.dimension();
  const int ell = *q.degree();
  check_convergent_degree(n, ell);
  r.j_multiple = j_multiple_by_monomials(q);
  if (ell % 2 != 0) return r;
  r.j = j_value(n, ell);
  if (method == IntegralMethod::closed_form) {
    r.numeric = r.j_multiple.get_d() * r.j;
  } else {
    const double radial = radial_moment(n, ell);
    double s = 0.0;
    for (const auto& [alpha, c] : q.terms()) s += c.get_d() * sphere_monomial_moment(alpha);
    r.numeric = radial * s;
  }
  return r;
}

MixedMoment mixed_moment(const Polynomial& q) {
  MixedMoment m;
  if (q.is_zero()) return m;
  const int n = q.dimension();
  for (int d = *q.min_degree(); d <= *q.degree(); ++d) {
    const Polynomial part = q.homogeneous_part(d);
    if (part.is_zero()) continue;
    check_convergent_degree(n, d);
    const Rational mult = j_multiple_by_monomials(part);
    if (mult == 0) continue;
    m.multiples[d] = mult;
    m.numeric += mult.get_d() * j_value(n, d);
  }
  return m;
}

GradientMoment gradient_moment(const Polynomial& p, const std::vector<Rational>& x) {
  const Polynomial shifted = translate(p, x);
  GradientMoment g;
  for (const Polynomial& gi : gradient(shifted)) {
    g.components.push_back(mixed_moment(gi));
    g.values.push_back(g.components.back().numeric);
  }
  return g;
}

namespace {

void for_each_multi_index(int n, int total, MultiIndex& cur, int slot,
                          const std::function<void(const MultiIndex&)>& visit) {
  if (slot == n - 1) {
    cur[slot] = total;
    visit(cur);
    return;
  }
  for (int a = total; a >= 0; --a) {
    cur[slot] = a;
    for_each_multi_index(n, total - a, cur, slot + 1, visit);
  }
}

}  // namespace

ShiftExpansion shift_expansion(const Polynomial& q) {
  const int n = q.dimension();
  ShiftExpansion e{n, embed(q, 2 * n, n), {}, embed(q, 2 * n, 0)};
  const int ell = q.is_zero() ? 0 : *q.degree();
  for (int h = 1; h <= ell - 1; ++h) {
    Polynomial term(2 * n);
    MultiIndex alpha(n, 0);
    for_each_multi_index(n, h, alpha, 0, [&](const MultiIndex& a) {
      Polynomial deriv = q;
      Integer factorial = 1;
      for (int i = 0; i < n; ++i) {
        for (int e2 = 0; e2 < a[i]; ++e2) deriv = partial(deriv, i);
        for (int f = 2; f <= a[i]; ++f) factorial *= f;
      }
      if (deriv.is_zero()) return;
      MultiIndex xi_part(2 * n, 0);
      for (int i = 0; i < n; ++i) xi_part[i] = a[i];
      term += Polynomial::monomial(xi_part, Rational(1) / Rational(factorial)) * embed(deriv, 2 * n, n);
    });
    e.xi_terms.push_back(std::move(term));
  }
  return e;
}

BoundShift bind_shift(const ShiftExpansion& e, const std::vector<Rational>& xi) {
  BoundShift b{bind_leading(e.base, xi), {}, 0};
  for (const auto& t : e.xi_terms) b.xi_terms.push_back(bind_leading(t, xi));
  b.constant = bind_leading(e.constant, xi).coefficient(MultiIndex(e.n, 0));
  return b;
}

ChangeOfCenter change_of_center(const Polynomial& q, const std::vector<double>& xi, double lambda,
                                double rho, int radial_points, int polar_points) {
  if (!q.is_homogeneous() || q.is_zero())
    throw PreconditionError("change_of_center: Q must be a nonzero homogeneous polynomial");
  if (!(lambda > 0.0) || !(rho > 0.0))
    throw PreconditionError("change_of_center: lambda and rho must be positive");
  const int n = q.dimension();
  const int ell = *q.degree();
  if (ell > n - 2) throw DivergenceError("change_of_center: degree must be at most n - 2");
  if (static_cast<int>(xi.size()) != n) throw DimensionMismatch(n, static_cast<int>(xi.size()));

  std::vector<Rational> x(n);
  for (int i = 0; i < n; ++i) x[i] = rational_from_double(xi[i]) / rational_from_double(lambda);

  ChangeOfCenter out;
  out.ell = ell;
  const double lam_pow = std::pow(lambda, ell);
  out.base_group = lam_pow * moment_integral(q).numeric;
  const BoundShift parts = bind_shift(shift_expansion(q), x);
  for (const auto& t : parts.xi_terms) {
    const double v = t.is_zero() ? 0.0 : lam_pow * moment_integral(t).numeric;
    out.shift_terms.push_back(v);
    out.shift_group += v;
  }
  out.constant_group = lam_pow * parts.constant.get_d() * j_value(n, 0);
  out.breakdown_sum = out.base_group + out.shift_group + out.constant_group;

  // y = lambda Y maps the integral to lambda^ell times the integral of
  // Q(Y) (1 + |Y - X|^2)^{-n} over |Y| < rho / lambda with X = xi / lambda.
  std::vector<double> xd(n);
  for (int i = 0; i < n; ++i) xd[i] = xi[i] / lambda;
  const PointFn integrand = [&](const std::vector<double>& y) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) d2 += (y[i] - xd[i]) * (y[i] - xd[i]);
    return evaluate(q, y) * std::pow(1.0 + d2, -n);
  };
  out.quadrature = lam_pow * ball_integral(integrand, n, rho / lambda, radial_points, polar_points);
  return out;
}

namespace {

void check_identity_args(int n, int k, const MultiIndex& alpha) {
  if (static_cast<int>(alpha.size()) != n) throw DimensionMismatch(n, static_cast<int>(alpha.size()));
  if (n < 2) throw PreconditionError("identity checks need n >= 2");
  if (k < 2 || k % 2 != 0) throw PreconditionError("identity checks need even k >= 2");
  for (int a : alpha)
    if (a < 0 || a % 2 != 0) throw PreconditionError("identity checks need an even multi-index");
  if (alpha[0] != 0 || alpha[n - 1] != 0)
    throw PreconditionError("identity checks need alpha to vanish in slots 1 and n");
}

std::pair<Polynomial, Polynomial> identity_sides(int n, int k, const MultiIndex& alpha) {
  MultiIndex lhs = alpha;
  lhs[0] = k + 2;
  MultiIndex rhs = alpha;
  rhs[0] = k;
  rhs[n - 1] = 2;
  return {Polynomial::monomial(lhs), Polynomial::monomial(rhs, Rational(k + 1))};
}

}  // namespace

bool reduction_identity_check(int n, int k, const MultiIndex& alpha) {
  check_identity_args(n, k, alpha);
  check_convergent_degree(n, k + 2 + total_degree(alpha));
  const auto [lhs, rhs] = identity_sides(n, k, alpha);
  return j_multiple_by_monomials(lhs) == j_multiple_by_monomials(rhs);
}

bool laplacian_identity_check(int n, int k, const MultiIndex& alpha) {
  check_identity_args(n, k, alpha);
  const auto [lhs, rhs] = identity_sides(n, k, alpha);
  const int h = (k + 2 + total_degree(alpha)) / 2;
  return iterated_laplacian(lhs, h) == iterated_laplacian(rhs, h);
}

}  // namespace bc
