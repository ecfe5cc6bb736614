#pragma once

#include "bubblecorr/parallel.hpp"

#include <functional>
#include <vector>

namespace bc {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre rule with the given number of nodes.
const GaussRule& gauss_legendre(int points);

// Gauss rule for the weight (1 - t^2)^exponent on [-1, 1], exponent > -1.
const GaussRule& gauss_gegenbauer(int points, double exponent);

// Integral of f over [a, b] with the given Gauss-Legendre rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int points);

// Product rule on the unit sphere S^{n-1}: x_1 = t with a Gauss rule for the
// weight (1 - t^2)^{(n-3)/2}, the rest sqrt(1 - t^2) times a node of S^{n-2},
// down to the trapezoid rule on the circle. Exact for polynomials of degree
// below 2 * polar_points.
struct SphereRule {
  int n = 0;
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
};

// polar_points Gauss nodes per polar level, 2 * polar_points azimuth nodes;
// zero selects default_polar_points(n). A positive outer_points overrides the
// node count of the outermost level (the x_1 axis) only.
const SphereRule& sphere_rule(int n, int polar_points, int outer_points = 0);

// Largest polar_points (at most 32) keeping the sphere rule near 2e5 nodes.
int default_polar_points(int n);

double sphere_area(int n);

using PointFn = std::function<double(const std::vector<double>&)>;

// Integral of f over the sphere |y - center| = radius with a prepared rule.
double sphere_integral(const PointFn& f, const SphereRule& rule, const std::vector<double>& center,
                       double radius, Exec exec = Exec::parallel);

// Integral of f over the sphere |y - center| = radius.
double sphere_integral(const PointFn& f, const std::vector<double>& center, double radius,
                       int polar_points, Exec exec = Exec::parallel);

// Mean of f over the sphere |y - center| = radius.
double sphere_average(const PointFn& f, const std::vector<double>& center, double radius,
                      int polar_points, Exec exec = Exec::parallel);

// Integral of f over the ball |y| < radius in polar coordinates. The radius is
// parametrised as r = tan(theta) so that long radial ranges stay resolved.
double ball_integral(const PointFn& f, int n, double radius, int radial_points, int polar_points,
                     Exec exec = Exec::parallel);

}  // namespace bc
