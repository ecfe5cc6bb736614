#include "bubblecorr/profile.hpp"

#include "bubblecorr/quadrature.hpp"
#include "bubblecorr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bc {

namespace {

double norm2(const Point& y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return s;
}

double dist2(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

void check_dim(int n, const Point& y) {
  if (static_cast<int>(y.size()) != n) throw DimensionMismatch(n, static_cast<int>(y.size()));
}

// Uniform point in the ball |y| < radius.
Point ball_sample(int n, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Point y(n);
  double s = 0.0;
  for (auto& v : y) {
    v = gauss(rng);
    s += v * v;
  }
  const double r = radius * std::pow(unif(rng), 1.0 / n) / std::sqrt(s);
  for (auto& v : y) v *= r;
  return y;
}

Point sphere_sample(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Point y(n);
  double s = 0.0;
  for (auto& v : y) {
    v = gauss(rng);
    s += v * v;
  }
  s = std::sqrt(s);
  for (auto& v : y) v /= s;
  return y;
}

}  // namespace

double c_tilde(int n) { return (n - 2.0) / (4.0 * (n - 1.0)); }

double bubble(const BubbleParams& b, const Point& y) {
  check_dim(b.n, y);
  if (!(b.eps > 0.0)) throw PreconditionError("bubble: eps must be positive");
  return std::pow(b.eps / (b.eps * b.eps + dist2(y, b.center)), 0.5 * (b.n - 2));
}

Point bubble_gradient(const BubbleParams& b, const Point& y) {
  const double a = bubble(b, y);
  const double q = b.eps * b.eps + dist2(y, b.center);
  Point g(b.n);
  for (int i = 0; i < b.n; ++i) g[i] = -(b.n - 2) * a * (y[i] - b.center[i]) / q;
  return g;
}

double bubble_laplacian(const BubbleParams& b, const Point& y) {
  // A = (eps / q)^{m} with m = (n-2)/2, q = eps^2 + r^2:
  // Delta A = A (-2mn / q + 4m(m+1) r^2 / q^2)
  const double a = bubble(b, y);
  const double r2 = dist2(y, b.center);
  const double q = b.eps * b.eps + r2;
  const double m = 0.5 * (b.n - 2);
  return a * (-2.0 * m * b.n / q + 4.0 * m * (m + 1.0) * r2 / (q * q));
}

Point to_sphere(const Point& y) {
  const double s = norm2(y);
  Point x(y.size() + 1);
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = 2.0 * y[i] / (1.0 + s);
  x.back() = (s - 1.0) / (s + 1.0);
  return x;
}

Point from_sphere(const Point& x) {
  if (x.size() < 2) throw PreconditionError("from_sphere: need a point of S^n with n >= 1");
  const double denom = 1.0 - x.back();
  if (!(denom > 0.0)) throw PreconditionError("from_sphere: the north pole has no finite image");
  Point y(x.size() - 1);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] / denom;
  return y;
}

double v_from_u(const std::function<double(const Point&)>& u, const Point& y) {
  const double n = static_cast<double>(y.size());
  return u(to_sphere(y)) * std::pow(2.0 / (1.0 + norm2(y)), 0.5 * (n - 2.0));
}

double u_from_v(const std::function<double(const Point&)>& v, const Point& x) {
  const Point y = from_sphere(x);
  const double n = static_cast<double>(y.size());
  return v(y) / std::pow(2.0 / (1.0 + norm2(y)), 0.5 * (n - 2.0));
}

double CurvatureModel::k(const Point& y) const { return evaluate(scaled, y) / c_tilde(n); }

double CurvatureModel::y_dot_grad_k(const Point& y) const { return evaluate(radial, y) / c_tilde(n); }

Point CurvatureModel::grad_k(const Point& y) const {
  Point g(n);
  for (int i = 0; i < n; ++i) g[i] = evaluate(partial(scaled, i), y) / c_tilde(n);
  return g;
}

CurvatureModel synth_K(const Polynomial& p, const std::optional<Polynomial>& remainder) {
  if (p.is_zero() || !p.is_homogeneous() || *p.degree() < 2)
    throw PreconditionError("synth_K: P must be homogeneous of degree at least 2");
  const int n = p.dimension();
  Polynomial scaled = Polynomial::constant(n, Rational(n * (n - 2))) - p;
  if (remainder) {
    if (remainder->dimension() != n) throw DimensionMismatch(n, remainder->dimension());
    scaled += *remainder;
  }
  Polynomial radial = euler_operator(scaled);
  return {n, std::move(scaled), std::move(radial)};
}

double pi_eval(const Polynomial& gamma, const Point& y) {
  check_dim(gamma.dimension(), y);
  return evaluate(gamma, y) * std::pow(1.0 + norm2(y), -0.5 * gamma.dimension());
}

std::vector<double> loglog_slopes(const std::vector<double>& scales, const std::vector<double>& values) {
  if (scales.size() != values.size()) throw PreconditionError("loglog_slopes: length mismatch");
  std::vector<double> out;
  for (std::size_t i = 1; i < scales.size(); ++i)
    out.push_back((std::log(values[i]) - std::log(values[i - 1])) /
                  (std::log(scales[i]) - std::log(scales[i - 1])));
  return out;
}

ResidualReport linearized_residual(const Polynomial& gamma, const Polynomial& p, std::size_t samples,
                                   std::uint64_t seed, double radius, Exec exec) {
  const int n = gamma.dimension();
  if (p.dimension() != n) throw DimensionMismatch(n, p.dimension());
  if (n < 3) throw PreconditionError("linearized_residual: n must be at least 3");
  if (!(apply_L(gamma) == p))
    throw PreconditionError("linearized_residual: gamma does not solve the linear equation exactly");

  const std::vector<Polynomial> grad = gradient(gamma);
  const Polynomial lap = laplacian(gamma);
  std::mt19937_64 rng(seed);
  std::vector<Point> pts(samples);
  for (auto& y : pts) y = ball_sample(n, radius, rng);

  const double dn = n;
  const std::vector<double> res = indexed_map<double>(
      samples,
      [&](std::size_t idx) {
        const Point& y = pts[idx];
        const double s = 1.0 + norm2(y);
        const double w = std::pow(s, -0.5 * dn);
        const double dw_factor = -dn * std::pow(s, -0.5 * dn - 1.0);  // grad w = dw_factor * y
        const double lap_w = -dn * dn * std::pow(s, -0.5 * dn - 1.0) +
                             dn * (dn + 2.0) * (s - 1.0) * std::pow(s, -0.5 * dn - 2.0);
        const double g = evaluate(gamma, y);
        double grad_dot = 0.0;
        for (int i = 0; i < n; ++i) grad_dot += evaluate(grad[i], y) * y[i];
        const double lap_pi = evaluate(lap, y) * w + 2.0 * dw_factor * grad_dot + g * lap_w;
        const double pi = g * w;
        const double a1 = std::pow(s, -0.5 * (dn - 2.0));
        return lap_pi + dn * (dn + 2.0) * std::pow(a1, 4.0 / (dn - 2.0)) * pi -
               evaluate(p, y) * std::pow(a1, (dn + 2.0) / (dn - 2.0));
      },
      exec);

  ResidualReport r;
  r.samples = samples;
  double sum = 0.0;
  for (double v : res) {
    r.max_abs = std::max(r.max_abs, std::abs(v));
    sum += std::abs(v);
  }
  r.mean_abs = samples ? sum / static_cast<double>(samples) : 0.0;
  return r;
}

double HarmonicTail::operator()(const Point& y) const {
  double s = 0.0;
  for (const auto& hp : points) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = lambda * y[i] - hp.location[i];
      d2 += d * d;
    }
    if (d2 == 0.0) throw PreconditionError("harmonic tail evaluated at a pole");
    s += hp.weight * std::pow(d2, -0.5 * (n - 2));
  }
  return s;
}

double HarmonicTail::h_o() const { return (*this)(Point(n, 0.0)); }

double interpolation_R_radial(double r) {
  if (r >= 1.0) return r;
  const double r3 = r * r * r;
  return r3 * (6.0 - 8.0 * r + 3.0 * r * r);
}

double interpolation_R(const Point& y) { return interpolation_R_radial(std::sqrt(norm2(y))); }

RefinedProfile::RefinedProfile(RefinedProfileSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.n;
  if (n < 3) throw PreconditionError("refined profile: n must be at least 3");
  if (spec_.ell < 2 || spec_.ell > n - 2) throw PreconditionError("refined profile: need 2 <= ell <= n - 2");
  if (!(spec_.lambda > 0.0)) throw PreconditionError("refined profile: lambda must be positive");
  if (!(spec_.joint_radius_c > 0.0)) throw PreconditionError("refined profile: joint radius must be positive");
  check_dim(n, spec_.xi);
  if (spec_.gamma.dimension() != n) throw DimensionMismatch(n, spec_.gamma.dimension());
  if (spec_.gamma.coefficient(MultiIndex(n, 0)) != 0)
    throw PreconditionError("refined profile: gamma must have no constant term");
  for (const auto& hp : spec_.harmonic_points) {
    check_dim(n, hp.location);
    if (!(hp.weight > 0.0)) throw PreconditionError("refined profile: harmonic weights must be positive");
    if (!(std::sqrt(norm2(hp.location)) > 2.0 * spec_.joint_radius_c))
      throw PreconditionError("refined profile: harmonic points must lie outside twice the joint radius");
  }
  h_o_ = tail().h_o();
}

HarmonicTail RefinedProfile::tail() const { return {spec_.n, spec_.harmonic_points, spec_.lambda}; }

ProfileComponents RefinedProfile::components(const Point& y) const {
  const int n = spec_.n;
  check_dim(n, y);
  const double lam = spec_.lambda;
  Point d(n), big_y(n);
  for (int i = 0; i < n; ++i) {
    d[i] = y[i] - spec_.xi[i];
    big_y[i] = d[i] / lam;
  }
  const double d2 = norm2(d);
  const double base = lam / (lam * lam + d2);

  ProfileComponents c;
  c.bubble = std::pow(base, 0.5 * (n - 2));
  c.correction = std::pow(lam, spec_.ell + 1) * evaluate(spec_.gamma, big_y) * std::pow(base, 0.5 * n);
  double sum = 0.0;
  for (const auto& hp : spec_.harmonic_points) {
    const double r0 = std::pow(norm2(hp.location), -0.5 * (n - 2));
    const double r1 = std::pow(dist2(d, hp.location), -0.5 * (n - 2));
    sum += hp.weight * (r1 - r0);
  }
  sum += lam * h_o_ * interpolation_R(big_y) / spec_.joint_radius_c;
  c.harmonic_group = std::pow(lam, 0.5 * (n - 2)) * sum;
  c.total = c.bubble + c.correction + c.harmonic_group;
  return c;
}

double RefinedProfile::correction_power_form(const Point& y) const {
  const int n = spec_.n;
  check_dim(n, y);
  Point big_y(n);
  for (int i = 0; i < n; ++i) big_y[i] = (y[i] - spec_.xi[i]) / spec_.lambda;
  const BubbleParams b{n, spec_.lambda, spec_.xi};
  return std::pow(spec_.lambda, spec_.ell + 1) * evaluate(spec_.gamma, big_y) *
         std::pow(bubble(b, y), static_cast<double>(n) / (n - 2));
}

Point RefinedProfile::gradient_at_center() const {
  const int n = spec_.n;
  const double lam = spec_.lambda;
  const Point zero(n, 0.0);
  Point g(n, 0.0);
  const double corr_scale = std::pow(lam, spec_.ell + 1) * std::pow(lam, -0.5 * n) / lam;
  const double harm_scale = std::pow(lam, 0.5 * (n - 2)) * (n - 2);
  for (int i = 0; i < n; ++i) {
    g[i] = corr_scale * evaluate(partial(spec_.gamma, i), zero);
    for (const auto& hp : spec_.harmonic_points)
      g[i] += harm_scale * hp.weight * hp.location[i] * std::pow(norm2(hp.location), -0.5 * n);
  }
  return g;
}

double RefinedProfile::harmonic_group_rescaled(const Point& y_rescaled) const {
  const int n = spec_.n;
  const double lam = spec_.lambda;
  const double ln2 = std::pow(lam, n - 2);
  return ln2 * tail()(y_rescaled) -
         ln2 * h_o_ * (1.0 - lam * interpolation_R(y_rescaled) / spec_.joint_radius_c);
}

double RefinedProfile::mezzo_deviation(const std::function<double(const Point&)>& v,
                                       const Point& y_rescaled) const {
  const int n = spec_.n;
  check_dim(n, y_rescaled);
  const double lam = spec_.lambda;
  Point y(n);
  for (int i = 0; i < n; ++i) y[i] = spec_.xi[i] + lam * y_rescaled[i];
  const double big_v = std::pow(lam, 0.5 * (n - 2)) * v(y);
  const double a1 = std::pow(1.0 + norm2(y_rescaled), -0.5 * (n - 2));
  return big_v - a1 - std::pow(lam, n - 2) * tail()(y_rescaled);
}

double RefinedProfile::d_pi(const std::function<double(const Point&)>& v, const Point& y_rescaled) const {
  const int n = spec_.n;
  const double lam = spec_.lambda;
  return mezzo_deviation(v, y_rescaled) - std::pow(lam, spec_.ell) * pi_eval(spec_.gamma, y_rescaled) +
         std::pow(lam, n - 2) * h_o_ * (1.0 - lam * interpolation_R(y_rescaled) / spec_.joint_radius_c);
}

Point GreensBall::reflect(const Point& xi) const {
  const double s = norm2(xi);
  if (s == 0.0) throw PreconditionError("reflect: the center has no reflection");
  Point out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = a * a * xi[i] / s;
  return out;
}

double GreensBall::green(const Point& y, const Point& xi) const {
  check_dim(n, y);
  check_dim(n, xi);
  const double c = 1.0 / ((n - 2) * sphere_area(n));
  const double direct = std::pow(dist2(y, xi), -0.5 * (n - 2));
  const double s = norm2(xi);
  double image;
  if (s == 0.0) {
    image = std::pow(a, -(n - 2));
  } else {
    image = std::pow(a * a / s, 0.5 * (n - 2)) * std::pow(dist2(y, reflect(xi)), -0.5 * (n - 2));
  }
  return -c * (direct - image);
}

double GreensBall::poisson(const Point& y, const Point& xi) const {
  check_dim(n, y);
  check_dim(n, xi);
  return (a * a - norm2(xi)) / (a * sphere_area(n) * std::pow(dist2(y, xi), 0.5 * n));
}

GreenCheckReport green_check(int n, double a, const std::vector<double>& deltas, std::size_t samples,
                             std::uint64_t seed, int polar_points) {
  if (n < 3) throw PreconditionError("green_check: n must be at least 3");
  if (!(a > 0.0)) throw PreconditionError("green_check: radius must be positive");
  for (double d : deltas)
    if (!(d > 0.0 && d < 1.0)) throw PreconditionError("green_check: delta must lie in (0, 1)");
  const GreensBall g{n, a};
  GreenCheckReport rep;
  rep.n = n;
  rep.a = a;
  std::mt19937_64 rng(seed);

  for (std::size_t s = 0; s < samples; ++s) {
    Point xi = ball_sample(n, 0.9 * a, rng);
    const Point dir = sphere_sample(n, rng);
    Point y(n), y_near(n);
    for (int i = 0; i < n; ++i) {
      y[i] = a * dir[i];
      y_near[i] = a * (1.0 - 1e-12) * dir[i];
    }
    rep.dirichlet_max = std::max({rep.dirichlet_max, std::abs(g.green(y, xi)), std::abs(g.green(y_near, xi))});
    if (norm2(xi) > 0.0) {
      const double target = a * a / std::sqrt(norm2(xi));
      rep.reflection_error =
          std::max(rep.reflection_error, std::abs(std::sqrt(norm2(g.reflect(xi))) - target) / target);
    }
  }

  // The kernel peaks toward xi, so the rule is reflected to put its densely
  // resolved first axis along xi.
  const Point zero(n, 0.0);
  const SphereRule& rule = sphere_rule(n, polar_points, std::max(default_polar_points(n), 32));
  for (double frac : {0.0, 0.3, 0.6}) {
    Point xi(n, 0.0);
    Point v(n, 0.0);
    if (frac > 0.0) {
      const Point dir = sphere_sample(n, rng);
      for (int i = 0; i < n; ++i) {
        xi[i] = frac * a * dir[i];
        v[i] = -dir[i];
      }
      v[0] += 1.0;
    }
    const double vv = norm2(v);
    rep.poisson_normalization.push_back(sphere_integral(
        [&](const Point& y) {
          if (vv < 1e-24) return g.poisson(y, xi);
          double dot = 0.0;
          for (int i = 0; i < n; ++i) dot += v[i] * y[i];
          Point z(n);
          for (int i = 0; i < n; ++i) z[i] = y[i] - 2.0 * dot / vv * v[i];
          return g.poisson(z, xi);
        },
        rule, zero, a, Exec::serial));
  }

  const double c1 = 1.0 / ((n - 2) * sphere_area(n));
  for (double delta : deltas) {
    GreenBoundConstants b;
    b.delta = delta;
    b.c1 = c1;
    for (std::size_t s = 0; s < samples; ++s) {
      Point xi = ball_sample(n, (1.0 - delta) * a, rng);
      if (s % 4 == 0) {
        const double r = std::sqrt(norm2(xi));
        if (r > 0.0)
          for (auto& v : xi) v *= (1.0 - delta) * a / r;
      }
      const Point y = ball_sample(n, a, rng);
      const double d2 = dist2(y, xi);
      if (d2 == 0.0) continue;
      const double ratio = std::abs(g.green(y, xi)) * std::pow(d2, 0.5 * (n - 2));
      b.max_ratio = std::max(b.max_ratio, ratio);
      b.c2 = std::max(b.c2, std::max(0.0, ratio - c1) * std::pow(delta, n - 2));
      const Point dir = sphere_sample(n, rng);
      Point yb(n);
      for (int i = 0; i < n; ++i) yb[i] = a * dir[i];
      b.c3 = std::max(b.c3, g.poisson(yb, xi) * std::pow(delta, n) * std::pow(a, n - 1));
    }
    rep.bounds.push_back(b);
  }
  return rep;
}

RescaledAverage rescaled_average(const std::function<double(const Point&)>& v, const Point& xi,
                                 const std::vector<double>& radii, int polar_points, Exec exec) {
  const int n = static_cast<int>(xi.size());
  if (n < 2) throw PreconditionError("rescaled_average: n must be at least 2");
  for (double r : radii)
    if (!(r > 0.0)) throw PreconditionError("rescaled_average: radii must be positive");
  RescaledAverage out;
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end(), std::greater<>());
  out.radii = rs;
  for (double r : rs) {
    const double avg = sphere_average(v, xi, r, polar_points, exec);
    if (!(avg > 0.0)) throw PreconditionError("rescaled_average: v must be positive on the sampled spheres");
    const double w = std::pow(r, 0.5 * (n - 2)) * avg;
    out.wbar.push_back(w);
    out.t.push_back(-std::log(r));
    out.wtilde.push_back(w);
  }
  int last_sign = 0;
  for (std::size_t i = 1; i < out.wtilde.size(); ++i) {
    const double d = out.wtilde[i] - out.wtilde[i - 1];
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++out.critical_points;
    last_sign = sign;
  }
  return out;
}

LinearizationReport linearization_bound_check(int n, std::size_t samples, std::uint64_t seed) {
  if (n < 3) throw PreconditionError("linearization_bound_check: n must be at least 3");
  LinearizationReport rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double beta = 2.0 * n / (n - 2.0);
  const double c_beta = (std::pow(2.0, beta) + 1.0) * std::pow(beta + 1.0, beta);
  const double c_bar = std::pow(2.0, beta - 1.0) * c_beta;
  const double q = (n + 2.0) / (n - 2.0);
  rep.decomposition_bound = 0.5 * q * (q - 1.0) * std::pow(4.0, std::abs(q - 2.0));
  const double epsilons[] = {0.1, 0.01};

  for (std::size_t s = 0; s < samples; ++s) {
    // Power-mean bounds on a > b > 0, p >= 1.
    const double a = 0.01 + 10.0 * unit(rng);
    const double b = a * (0.001 + 0.998 * unit(rng));
    const double p = 1.0 + 5.0 * unit(rng);
    const double lhs = std::pow(a, p) - std::pow(b, p);
    if (lhs > (1.0 / p) * (a - b) * std::pow(a, p - 1.0) * (1.0 + 1e-12)) ++rep.printed_form_violations;
    if (lhs > p * (a - b) * std::pow(a, p - 1.0) * (1.0 + 1e-12)) ++rep.mean_value_violations;

    // Single-term bound on t in [-1, 10].
    const double t = -1.0 + 11.0 * unit(rng);
    const double eps = epsilons[s % 2];
    const double single_lhs = std::abs(std::pow(1.0 + t, beta) - 1.0);
    if (single_lhs > eps + c_beta * std::pow(eps, -beta) * std::pow(std::abs(t), beta)) ++rep.single_term_violations;

    // Three-term version with A > 0 and A + B + C > 0.
    const double big_a = 0.01 + 5.0 * unit(rng);
    const double big_b = -big_a + 10.0 * unit(rng);
    double big_c = -5.0 + 10.0 * unit(rng);
    if (big_a + big_b + big_c <= 0.0) big_c = -(big_a + big_b) + 1e-3 + unit(rng);
    const double three_lhs = std::abs(std::pow(big_a + big_b + big_c, beta) - std::pow(big_a, beta));
    const double three_rhs = eps * std::pow(big_a, beta) +
                             c_bar * std::pow(eps, -beta) *
                                 (std::pow(std::abs(big_b), beta) + std::pow(std::abs(big_c), beta));
    if (three_lhs > three_rhs) ++rep.three_term_violations;

    // Second-order remainder of x^q about a, on comparable pairs.
    const double aa = 0.01 + 10.0 * unit(rng);
    const double bb = aa * std::pow(4.0, -1.0 + 2.0 * unit(rng));
    if (std::abs(aa - bb) > 1e-3 * aa) {
      const double rem = std::pow(aa, q) - std::pow(bb, q) - q * std::pow(aa, 4.0 / (n - 2.0)) * (aa - bb);
      rep.decomposition_ratio_max =
          std::max(rep.decomposition_ratio_max, std::abs(rem) / ((aa - bb) * (aa - bb) * std::pow(aa, q - 2.0)));
    }
  }
  return rep;
}

}  // namespace bc
