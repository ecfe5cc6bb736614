#pragma once

#include "bubblecorr/parallel.hpp"
#include "bubblecorr/polynomial.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace bc {

using Point = std::vector<double>;

// (n - 2) / (4 (n - 1))
double c_tilde(int n);

struct BubbleParams {
  int n = 0;
  double eps = 1.0;
  Point center;
};

// (eps / (eps^2 + |y - center|^2))^{(n-2)/2}
double bubble(const BubbleParams& b, const Point& y);
Point bubble_gradient(const BubbleParams& b, const Point& y);
// Closed-form Laplacian from differentiating the radial profile twice.
double bubble_laplacian(const BubbleParams& b, const Point& y);

// Inverse stereographic projection R^n -> S^n in R^{n+1}; the north pole
// (0, ..., 0, 1) corresponds to infinity.
Point to_sphere(const Point& y);
// Throws PreconditionError at the north pole.
Point from_sphere(const Point& x);
// v(y) = u(x(y)) (2 / (1 + |y|^2))^{(n-2)/2}
double v_from_u(const std::function<double(const Point&)>& u, const Point& y);
double u_from_v(const std::function<double(const Point&)>& v, const Point& x);

// c~_n K(y) = n(n-2) - P(y) + remainder(y), held as an exact polynomial.
struct CurvatureModel {
  int n = 0;
  Polynomial scaled;  // c~_n K
  Polynomial radial;  // <y, grad(c~_n K)>

  double k(const Point& y) const;
  double y_dot_grad_k(const Point& y) const;
  Point grad_k(const Point& y) const;
};
CurvatureModel synth_K(const Polynomial& p, const std::optional<Polynomial>& remainder = std::nullopt);

// Pi(Y) = Gamma(Y) / (1 + |Y|^2)^{n/2}
double pi_eval(const Polynomial& gamma, const Point& y);

struct ResidualReport {
  std::size_t samples = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::vector<double> scales;
  std::vector<double> values;
  // Log-log slopes between consecutive scales.
  std::vector<double> slopes;
};

std::vector<double> loglog_slopes(const std::vector<double>& scales, const std::vector<double>& values);

// Samples Delta Pi + n(n+2) A_1^{4/(n-2)} Pi - P A_1^{(n+2)/(n-2)} at points
// drawn uniformly from the ball |Y| < radius. Refuses unverified gamma.
ResidualReport linearized_residual(const Polynomial& gamma, const Polynomial& p, std::size_t samples,
                                   std::uint64_t seed, double radius = 3.0,
                                   Exec exec = Exec::parallel);

struct HarmonicPoint {
  Point location;
  double weight = 0.0;
};

// H(Y) = sum_j A_j |lambda Y - Y_j|^{-(n-2)}
struct HarmonicTail {
  int n = 0;
  std::vector<HarmonicPoint> points;
  double lambda = 1.0;

  double operator()(const Point& y) const;
  double h_o() const;
};

// C^2 radial function equal to |Y| for |Y| >= 1 and 6r^3 - 8r^4 + 3r^5 inside.
double interpolation_R(const Point& y);
double interpolation_R_radial(double r);

struct RefinedProfileSpec {
  int n = 0;
  int ell = 0;
  double lambda = 0.0;
  Point xi;
  Polynomial gamma{1};
  std::vector<HarmonicPoint> harmonic_points;
  double joint_radius_c = 1.0;
};

struct ProfileComponents {
  double bubble = 0.0;
  double correction = 0.0;
  double harmonic_group = 0.0;
  double total = 0.0;
};

class RefinedProfile {
 public:
  explicit RefinedProfile(RefinedProfileSpec spec);

  const RefinedProfileSpec& spec() const { return spec_; }
  double h_o() const { return h_o_; }

  ProfileComponents components(const Point& y) const;
  double operator()(const Point& y) const { return components(y).total; }

  // The correction written as lambda^{ell+1} Gamma(Y) [A_{lambda,xi}]^{n/(n-2)}.
  double correction_power_form(const Point& y) const;

  // Gradient of the profile at y = xi.
  Point gradient_at_center() const;

  // lambda^{n-2} H(Y) - lambda^{n-2} h_o (1 - lambda R~(Y) / c)
  double harmonic_group_rescaled(const Point& y_rescaled) const;

  // D(Y) = V - A_1 - lambda^ell Pi - lambda^{n-2} H + lambda^{n-2} h_o (1 - lambda R~ / c)
  // with V(Y) = lambda^{(n-2)/2} v(xi + lambda Y).
  double d_pi(const std::function<double(const Point&)>& v, const Point& y_rescaled) const;

  // V - A_1 - lambda^{n-2} H at a rescaled point.
  double mezzo_deviation(const std::function<double(const Point&)>& v, const Point& y_rescaled) const;

  HarmonicTail tail() const;

 private:
  RefinedProfileSpec spec_;
  double h_o_ = 0.0;
};

struct GreensBall {
  int n = 0;
  double a = 1.0;

  Point reflect(const Point& xi) const;
  double green(const Point& y, const Point& xi) const;
  double poisson(const Point& y, const Point& xi) const;
};

struct GreenBoundConstants {
  double delta = 0.0;
  double c1 = 0.0;  // coefficient of the direct singular term
  double c2 = 0.0;  // measured coefficient of delta^{-(n-2)}
  double c3 = 0.0;  // measured Poisson constant
  double max_ratio = 0.0;  // max |G| |y - xi|^{n-2}
};

struct GreenCheckReport {
  int n = 0;
  double a = 1.0;
  double dirichlet_max = 0.0;
  double reflection_error = 0.0;
  std::vector<double> poisson_normalization;
  std::vector<GreenBoundConstants> bounds;
};

GreenCheckReport green_check(int n, double a, const std::vector<double>& deltas, std::size_t samples,
                             std::uint64_t seed, int polar_points = 0);

struct RescaledAverage {
  std::vector<double> radii;
  std::vector<double> wbar;
  std::vector<double> t;       // -log r, ascending
  std::vector<double> wtilde;  // wbar at r = e^{-t}
  int critical_points = 0;
};

RescaledAverage rescaled_average(const std::function<double(const Point&)>& v, const Point& xi,
                                 const std::vector<double>& radii, int polar_points = 0,
                                 Exec exec = Exec::parallel);

struct LinearizationReport {
  std::size_t samples = 0;
  // a^p - b^p <= (1/p)(a - b) a^{p-1} as printed
  std::size_t printed_form_violations = 0;
  // a^p - b^p <= p (a - b) a^{p-1}
  std::size_t mean_value_violations = 0;
  // |(1+t)^beta - 1| <= eps + C_beta eps^{-beta} |t|^beta, C_beta = (2^beta+1)(beta+1)^beta
  std::size_t single_term_violations = 0;
  // |(A+B+C)^beta - A^beta| <= eps A^beta + 2^{beta-1} C_beta eps^{-beta} (|B|^beta + |C|^beta)
  std::size_t three_term_violations = 0;
  // sup of |a^q - b^q - q a^{4/(n-2)} (a - b)| / ((a - b)^2 a^{q-2}) over
  // q = (n+2)/(n-2) and comparable pairs a/4 <= b <= 4a
  double decomposition_bound = 0.0;  // q(q-1)/2 * 4^{|q-2|}
  double decomposition_ratio_max = 0.0;
};

LinearizationReport linearization_bound_check(int n, std::size_t samples, std::uint64_t seed);

}  // namespace bc
