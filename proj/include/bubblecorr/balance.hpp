#pragma once

#include "bubblecorr/integrals.hpp"
#include "bubblecorr/polynomial.hpp"
#include "bubblecorr/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bc {

using RationalPoint = std::vector<Rational>;

// Blow-up points with their local data. Index 0 is the point at the origin.
struct BlowupConfiguration {
  int n = 0;
  std::vector<RationalPoint> points;
  // K at each point (not scaled by c~_n).
  std::vector<Rational> k_values;
  std::vector<Polynomial> taylor_polys;
  std::vector<RationalPoint> flex_vectors;
  std::vector<Rational> flex_exponents;
  std::vector<double> scale_ratios;

  // Throws PreconditionError on the first violated invariant.
  void validate() const;
};

struct ViolationReport {
  std::string constraint;
  std::optional<Rational> residual_exact;
  double residual_float = 0.0;
  bool pass = false;
  double tolerance = 0.0;
  std::string note;
};

struct GradientBounds {
  double c_low = 0.0;
  double c_high = 0.0;
  std::vector<double> argmin;
  std::size_t samples = 0;
};

// min and max of |grad P| over random unit vectors.
GradientBounds gradient_lower_bound(const Polynomial& p, std::size_t samples, std::uint64_t seed);

// The gradient moment g(X), component i = sum_d J(n, d) M_{i,d}(X), with each
// M_{i,d} an exact polynomial in X.
class GradientMomentMap {
 public:
  explicit GradientMomentMap(const Polynomial& p);
  int dimension() const { return n_; }
  std::vector<double> value(const std::vector<double>& x) const;
  // jacobian[i][k] = d g_i / d X_k
  std::vector<std::vector<double>> jacobian(const std::vector<double>& x) const;
  // components[i] maps degree d to M_{i,d}.
  const std::vector<std::map<int, Polynomial>>& components() const { return parts_; }

 private:
  int n_;
  std::vector<std::map<int, Polynomial>> parts_;
  std::vector<std::map<int, std::vector<Polynomial>>> grads_;
};

// Applies to P = sum_i c_i y_i^m with m even, every c_i nonzero and each
// variable in exactly one term. For such P each gradient-moment component is
// X_i times a positive function of X_i, so it vanishes only at X = 0.
struct ParityCertificate {
  bool applicable = false;
  bool proven = false;
  std::string reason;
};
ParityCertificate parity_certificate(const Polynomial& p);

struct FalsifierResult {
  std::optional<std::vector<double>> counterexample;
  double residual = 0.0;
  ParityCertificate certificate;
  std::size_t evaluations = 0;
};

struct FalsifierBudget {
  std::size_t directions = 400;
  std::vector<double> radii{0.25, 0.5, 1.0, 2.0, 4.0};
  std::size_t refine_starts = 12;
  int refine_iterations = 200;
  double tolerance = 1e-10;
  double min_norm = 1e-3;
  std::uint64_t seed = 1;
};

FalsifierResult flexibility_falsifier(const Polynomial& p, const FalsifierBudget& budget = {});

// Strict bounds on the flexibility exponent for ell = n - 2 and ell = n - 3 (n > 6).
bool eta_admissible(int n, int ell, const Rational& eta);

struct SinglePointReport {
  std::vector<ViolationReport> checks;
  bool degree_ok = false;
  bool vanishing_ok = false;
  std::vector<std::string> hypothesis_flags;
  bool pass() const;
};

// P(X) and the J-multiples of the shift parts of P at X, all exact.
SinglePointReport single_point_constraints(const Polynomial& p, const RationalPoint& x);

// (n-3) eta_m != h eta_j for j != m, 1 <= h <= n-3.
ViolationReport interference_check(int n, const std::vector<Rational>& etas);

struct BalanceReport {
  std::vector<ViolationReport> groups;
  bool pass() const;
};

BalanceReport multi_point_balance(const BlowupConfiguration& config, double rel_tol = 1e-10);

// <Y_m, grad P_m(X_m)>
Rational directional_value(const RationalPoint& y, const Polynomial& p, const RationalPoint& x);

struct PohozaevReport {
  double volume = 0.0;
  double flux = 0.0;  // already multiplied by (1/c~_n)(2n/(n-2))
  ViolationReport report;
};

using GradFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Volume side and flux side of the mezzo-scale balance on B(rho). Passes when
// the two agree within rel_tol relative, or when both are below abs_tol.
PohozaevReport pohozaev_volume_vs_surface(const PointFn& v, const GradFn& grad_v, const PointFn& k,
                                          const GradFn& grad_k, int n, double rho,
                                          double rel_tol = 1e-4, double abs_tol = 1e-6,
                                          int radial_points = 64, int polar_points = 16,
                                          Exec exec = Exec::parallel);

}  // namespace bc
