#include "bubblecorr/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <numbers>
#include <stdexcept>

namespace bc {

namespace {

template <int N>
GaussRule make_rule() {
  using boost::math::quadrature::gauss;
  const auto& abs = gauss<double, N>::abscissa();
  const auto& wts = gauss<double, N>::weights();
  GaussRule r;
  for (std::size_t i = 0; i < abs.size(); ++i) {
    if (abs[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(wts[i]);
      continue;
    }
    r.x.push_back(abs[i]);
    r.w.push_back(wts[i]);
    r.x.push_back(-abs[i]);
    r.w.push_back(wts[i]);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
  static const GaussRule r16 = make_rule<16>();
  static const GaussRule r24 = make_rule<24>();
  static const GaussRule r32 = make_rule<32>();
  static const GaussRule r48 = make_rule<48>();
  static const GaussRule r64 = make_rule<64>();
  static const GaussRule r128 = make_rule<128>();
  static const GaussRule r256 = make_rule<256>();
  switch (points) {
    case 16: return r16;
    case 24: return r24;
    case 32: return r32;
    case 48: return r48;
    case 64: return r64;
    case 128: return r128;
    case 256: return r256;
    default: return gauss_gegenbauer(points, 0.0);
  }
}

const GaussRule& gauss_gegenbauer(int points, double exponent) {
  if (points < 1) throw std::invalid_argument("gauss_gegenbauer: points must be positive");
  if (!(exponent > -1.0)) throw std::invalid_argument("gauss_gegenbauer: exponent must exceed -1");
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{points, exponent}];
  if (slot) return *slot;

  // Golub-Welsch on the monic three-term recurrence of the symmetric Jacobi family.
  const double a = exponent;
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double beta = k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0));
    jm(k, k - 1) = jm(k - 1, k) = std::sqrt(beta);
  }
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  auto rule = std::make_unique<GaussRule>();
  for (int i = 0; i < points; ++i) {
    const double v = es.eigenvectors()(0, i);
    rule->x.push_back(es.eigenvalues()(i));
    rule->w.push_back(mu0 * v * v);
  }
  slot = std::move(rule);
  return *slot;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int points) {
  const GaussRule& rule = gauss_legendre(points);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
  return half * s;
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

void append_sphere(int m, int p, int outer, std::vector<double>& prefix, double weight, SphereRule& rule) {
  if (m == 2) {
    const int azimuth = 2 * p;
    const double r = prefix.empty() ? 1.0 : prefix.back();
    prefix.pop_back();
    for (int k = 0; k < azimuth; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / azimuth;
      std::vector<double> x = prefix;
      x.push_back(r * std::cos(theta));
      x.push_back(r * std::sin(theta));
      rule.nodes.push_back(std::move(x));
      rule.weights.push_back(weight * 2.0 * std::numbers::pi / azimuth);
    }
    prefix.push_back(r);
    return;
  }
  // prefix.back() holds the radius of the remaining sub-sphere.
  const GaussRule& g = gauss_gegenbauer(outer, 0.5 * (m - 3));
  const double r = prefix.back();
  prefix.pop_back();
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    prefix.push_back(r * g.x[i]);
    prefix.push_back(r * std::sqrt(std::max(0.0, 1.0 - g.x[i] * g.x[i])));
    append_sphere(m - 1, p, p, prefix, weight * g.w[i], rule);
    prefix.pop_back();
    prefix.pop_back();
  }
  prefix.push_back(r);
}

SphereRule build_sphere_rule(int n, int polar_points, int outer_points) {
  if (n < 2) throw std::invalid_argument("sphere_rule: dimension must be at least 2");
  if (polar_points < 0) throw std::invalid_argument("sphere_rule: polar_points must be nonnegative");
  if (polar_points == 0) polar_points = default_polar_points(n);
  if (outer_points <= 0) outer_points = polar_points;
  SphereRule rule;
  rule.n = n;
  std::vector<double> prefix{1.0};
  append_sphere(n, polar_points, n > 2 ? outer_points : polar_points, prefix, 1.0, rule);
  return rule;
}

}  // namespace

int default_polar_points(int n) {
  constexpr double kBudget = 2e5;
  int p = 32;
  while (p > 2 && 2.0 * std::pow(p, n - 1) > kBudget) --p;
  return p;
}

const SphereRule& sphere_rule(int n, int polar_points, int outer_points) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<SphereRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, polar_points, outer_points}];
  if (!slot) slot = std::make_unique<SphereRule>(build_sphere_rule(n, polar_points, outer_points));
  return *slot;
}

double sphere_integral(const PointFn& f, const SphereRule& rule, const std::vector<double>& center,
                       double radius, Exec exec) {
  const int n = static_cast<int>(center.size());
  if (rule.n != n) throw std::invalid_argument("sphere_integral: rule dimension differs from the center");
  const double scale = std::pow(radius, n - 1);
  const double s = indexed_sum(
      rule.nodes.size(),
      [&](std::size_t i) {
        std::vector<double> y(n);
        for (int d = 0; d < n; ++d) y[d] = center[d] + radius * rule.nodes[i][d];
        return rule.weights[i] * f(y);
      },
      exec);
  return scale * s;
}

double sphere_integral(const PointFn& f, const std::vector<double>& center, double radius,
                       int polar_points, Exec exec) {
  return sphere_integral(f, sphere_rule(static_cast<int>(center.size()), polar_points), center, radius, exec);
}

double sphere_average(const PointFn& f, const std::vector<double>& center, double radius,
                      int polar_points, Exec exec) {
  const int n = static_cast<int>(center.size());
  return sphere_integral(f, center, radius, polar_points, exec) /
         (sphere_area(n) * std::pow(radius, n - 1));
}

double ball_integral(const PointFn& f, int n, double radius, int radial_points, int polar_points,
                     Exec exec) {
  const GaussRule& g = gauss_legendre(radial_points);
  const SphereRule& rule = sphere_rule(n, polar_points);
  const double theta_max = std::atan(radius);
  const std::size_t per_shell = rule.nodes.size();
  const std::size_t total = g.x.size() * per_shell;
  return indexed_sum(
      total,
      [&](std::size_t idx) {
        const std::size_t ir = idx / per_shell;
        const std::size_t ia = idx % per_shell;
        const double theta = 0.5 * theta_max * (g.x[ir] + 1.0);
        const double r = std::tan(theta);
        const double c = std::cos(theta);
        // dr = sec^2(theta) d(theta)
        const double jac = 0.5 * theta_max * g.w[ir] / (c * c) * std::pow(r, n - 1);
        std::vector<double> y(n);
        for (int d = 0; d < n; ++d) y[d] = r * rule.nodes[ia][d];
        return jac * rule.weights[ia] * f(y);
      },
      exec);
}

}  // namespace bc
