#include "bubblecorr/balance.hpp"

#include "bubblecorr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace bc {

namespace {

double c_tilde_of(int n) { return (n - 2.0) / (4.0 * (n - 1.0)); }

std::vector<double> unit_sample(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> y(n);
  double s = 0.0;
  for (auto& v : y) {
    v = gauss(rng);
    s += v * v;
  }
  s = std::sqrt(s);
  for (auto& v : y) v /= s;
  return y;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Dense solve with partial pivoting; returns nullopt when singular.
std::optional<std::vector<double>> small_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

std::string point_string(const RationalPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + p[i].get_str();
  return s + ")";
}

}  // namespace

void BlowupConfiguration::validate() const {
  if (n < 3) throw PreconditionError("configuration: n must be at least 3");
  const std::size_t k = points.size();
  if (k == 0) throw PreconditionError("configuration: at least one point is required");
  if (k_values.size() != k || taylor_polys.size() != k || flex_vectors.size() != k ||
      flex_exponents.size() != k || scale_ratios.size() != k)
    throw PreconditionError("configuration: all per-point lists must have the same length");
  for (std::size_t m = 0; m < k; ++m) {
    if (static_cast<int>(points[m].size()) != n) throw DimensionMismatch(n, static_cast<int>(points[m].size()));
    if (static_cast<int>(flex_vectors[m].size()) != n)
      throw DimensionMismatch(n, static_cast<int>(flex_vectors[m].size()));
    if (k_values[m] <= 0) throw PreconditionError("configuration: K values must be positive");
    if (flex_exponents[m] <= 0) throw PreconditionError("configuration: flexibility exponents must be positive");
    if (!(scale_ratios[m] > 0.0)) throw PreconditionError("configuration: scale ratios must be positive");
    const Polynomial& p = taylor_polys[m];
    if (p.dimension() != n) throw DimensionMismatch(n, p.dimension());
    if (!p.is_zero() && (!p.is_homogeneous() || *p.degree() != n - 2))
      throw PreconditionError("configuration: Taylor polynomial " + std::to_string(m) +
                              " must be homogeneous of degree n - 2");
  }
  for (const Rational& c : points[0])
    if (c != 0) throw PreconditionError("configuration: point 0 must be the origin");
  if (scale_ratios[0] != 1.0) throw PreconditionError("configuration: scale ratio of point 0 must be 1");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (points[a] == points[b]) throw PreconditionError("configuration: points must be pairwise distinct");
}

GradientBounds gradient_lower_bound(const Polynomial& p, std::size_t samples, std::uint64_t seed) {
  if (p.is_zero() || !p.is_homogeneous() || *p.degree() < 2)
    throw PreconditionError("gradient_lower_bound: P must be homogeneous of degree at least 2");
  if (samples == 0) throw PreconditionError("gradient_lower_bound: need at least one sample");
  const int n = p.dimension();
  const std::vector<Polynomial> grad = gradient(p);
  std::mt19937_64 rng(seed);
  GradientBounds b;
  b.samples = samples;
  b.c_low = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const std::vector<double> y = unit_sample(n, rng);
    double g2 = 0.0;
    for (const auto& gi : grad) {
      const double v = evaluate(gi, y);
      g2 += v * v;
    }
    const double g = std::sqrt(g2);
    if (g < b.c_low) {
      b.c_low = g;
      b.argmin = y;
    }
    b.c_high = std::max(b.c_high, g);
  }
  return b;
}

GradientMomentMap::GradientMomentMap(const Polynomial& p) : n_(p.dimension()) {
  if (!p.is_zero() && *p.degree() > n_)
    throw DivergenceError("gradient moment: degree of P must be at most n");
  // P(x + z) in 2n variables, x in slots 0..n-1.
  Polynomial expanded(2 * n_);
  for (const auto& [alpha, c] : p.terms()) {
    Polynomial term = Polynomial::constant(2 * n_, c);
    for (int i = 0; i < n_; ++i) {
      const Polynomial lin = Polynomial::variable(2 * n_, i) + Polynomial::variable(2 * n_, n_ + i);
      for (int e = 0; e < alpha[i]; ++e) term = term * lin;
    }
    expanded += term;
  }
  parts_.resize(n_);
  grads_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    const Polynomial d = partial(expanded, n_ + i);
    for (const auto& [alpha, c] : d.terms()) {
      Integer weight = 1;
      int zdeg = 0;
      MultiIndex xpart(n_, 0);
      for (int k = 0; k < n_; ++k) {
        weight *= double_factorial_minus2(alpha[n_ + k]);
        zdeg += alpha[n_ + k];
        xpart[k] = alpha[k];
      }
      if (weight == 0) continue;
      auto [it, inserted] = parts_[i].try_emplace(zdeg, n_);
      it->second.add_term(xpart, c * Rational(weight));
    }
    for (const auto& [d2, poly] : parts_[i]) grads_[i][d2] = gradient(poly);
  }
}

std::vector<double> GradientMomentMap::value(const std::vector<double>& x) const {
  std::vector<double> g(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (const auto& [d, poly] : parts_[i]) g[i] += j_value(n_, d) * evaluate(poly, x);
  return g;
}

std::vector<std::vector<double>> GradientMomentMap::jacobian(const std::vector<double>& x) const {
  std::vector<std::vector<double>> jac(n_, std::vector<double>(n_, 0.0));
  for (int i = 0; i < n_; ++i)
    for (const auto& [d, grads] : grads_[i]) {
      const double j = j_value(n_, d);
      for (int k = 0; k < n_; ++k) jac[i][k] += j * evaluate(grads[k], x);
    }
  return jac;
}

ParityCertificate parity_certificate(const Polynomial& p) {
  ParityCertificate c;
  const int n = p.dimension();
  if (p.is_zero()) {
    c.reason = "zero polynomial";
    return c;
  }
  std::vector<int> seen(n, 0);
  for (const auto& [alpha, coef] : p.terms()) {
    int var = -1;
    for (int i = 0; i < n; ++i) {
      if (alpha[i] == 0) continue;
      if (var >= 0) {
        c.reason = "term mixes variables";
        return c;
      }
      var = i;
    }
    if (var < 0) {
      c.reason = "constant term present";
      return c;
    }
    if (alpha[var] < 2 || alpha[var] % 2 != 0) {
      c.reason = "power of y" + std::to_string(var + 1) + " is not even";
      return c;
    }
    if (alpha[var] - 1 > n - 1) {
      c.reason = "gradient moment diverges";
      return c;
    }
    ++seen[var];
  }
  c.applicable = true;
  for (int i = 0; i < n; ++i)
    if (seen[i] != 1) {
      c.reason = "y" + std::to_string(i + 1) + " does not appear in exactly one term";
      return c;
    }
  c.proven = true;
  c.reason = "separable even powers in every variable";
  return c;
}

FalsifierResult flexibility_falsifier(const Polynomial& p, const FalsifierBudget& budget) {
  const int n = p.dimension();
  FalsifierResult r;
  r.certificate = parity_certificate(p);
  if (p.is_zero()) {
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    r.counterexample = e1;
    return r;
  }
  if (!p.is_homogeneous()) throw PreconditionError("flexibility_falsifier: P must be homogeneous");
  if (*p.degree() > n - 2) throw PreconditionError("flexibility_falsifier: degree must be at most n - 2");

  const GradientMomentMap g(p);
  std::mt19937_64 rng(budget.seed);
  struct Candidate {
    double score;
    std::vector<double> x;
  };
  std::vector<Candidate> cands;
  for (std::size_t d = 0; d < budget.directions; ++d) {
    const std::vector<double> dir = unit_sample(n, rng);
    for (double rad : budget.radii) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = rad * dir[i];
      ++r.evaluations;
      cands.push_back({l2(g.value(x)) / rad, x});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
  cands.resize(std::min(cands.size(), budget.refine_starts));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& start : cands) {
    std::vector<double> x = start.x;
    std::vector<double> gx = g.value(x);
    double f = l2(gx);
    double mu = 1e-3;
    for (int it = 0; it < budget.refine_iterations && f > budget.tolerance; ++it) {
      const auto jac = g.jacobian(x);
      std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
      std::vector<double> rhs(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          rhs[k] -= jac[i][k] * gx[i];
          for (int m = 0; m < n; ++m) a[k][m] += jac[i][k] * jac[i][m];
        }
      for (int k = 0; k < n; ++k) a[k][k] += mu * (1.0 + a[k][k]);
      const auto step = small_solve(a, rhs);
      if (!step) break;
      std::vector<double> trial(n);
      for (int i = 0; i < n; ++i) trial[i] = x[i] + (*step)[i];
      ++r.evaluations;
      const std::vector<double> gt = g.value(trial);
      const double ft = l2(gt);
      if (ft < f) {
        x = trial;
        gx = gt;
        f = ft;
        mu = std::max(mu * 0.3, 1e-12);
      } else {
        mu *= 10.0;
        if (mu > 1e12) break;
      }
    }
    if (l2(x) < budget.min_norm) continue;
    best = std::min(best, f);
    if (f <= budget.tolerance) {
      r.counterexample = x;
      r.residual = f;
      return r;
    }
  }
  r.residual = best;
  return r;
}

bool eta_admissible(int n, int ell, const Rational& eta) {
  if (eta < 0) throw PreconditionError("eta_admissible: eta must be non-negative");
  if (ell == n - 2) return eta < Rational(2, 3 * n - 2);
  if (ell == n - 3 && n > 6) return eta < Rational(n - 6, (n - 3) * (3 * n - 2));
  throw PreconditionError("eta_admissible: unsupported (n, ell); need ell = n - 2, or ell = n - 3 with n > 6");
}

bool SinglePointReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ViolationReport& v) { return v.pass; });
}

SinglePointReport single_point_constraints(const Polynomial& p, const RationalPoint& x) {
  const int n = p.dimension();
  if (static_cast<int>(x.size()) != n) throw DimensionMismatch(n, static_cast<int>(x.size()));
  if (p.is_zero() || !p.is_homogeneous())
    throw PreconditionError("single_point_constraints: P must be a nonzero homogeneous polynomial");
  SinglePointReport rep;
  const int ell = *p.degree();
  rep.degree_ok = ell == n - 2 || (ell == n - 3 && n > 6);
  if (!rep.degree_ok) rep.hypothesis_flags.push_back("degree must be n - 2, or n - 3 with n > 6");
  rep.vanishing_ok = iterated_laplacian(p, ell / 2).is_zero();
  if (!rep.vanishing_ok) rep.hypothesis_flags.push_back("top iterated Laplacian of P does not vanish");

  ViolationReport pv;
  pv.constraint = "P(X)";
  pv.residual_exact = evaluate(p, x);
  pv.residual_float = pv.residual_exact->get_d();
  pv.pass = *pv.residual_exact == 0;
  pv.note = "X = " + point_string(x);
  rep.checks.push_back(pv);

  const BoundShift parts = bind_shift(shift_expansion(p), x);
  for (std::size_t h = 0; h < parts.xi_terms.size(); ++h) {
    ViolationReport v;
    v.constraint = "shift_moment_" + std::to_string(h + 1);
    const Polynomial& t = parts.xi_terms[h];
    if (!t.is_zero() && *t.degree() > n - 1) {
      v.note = "moment diverges";
      rep.checks.push_back(v);
      continue;
    }
    v.residual_exact = j_multiple_by_monomials(t);
    v.residual_float = v.residual_exact->get_d();
    v.pass = *v.residual_exact == 0;
    v.note = "multiple of J(n, " + std::to_string(ell - static_cast<int>(h) - 1) + ")";
    rep.checks.push_back(v);
  }
  return rep;
}

ViolationReport interference_check(int n, const std::vector<Rational>& etas) {
  if (n <= 6) throw PreconditionError("interference_check: n must exceed 6");
  ViolationReport v;
  v.constraint = "interference";
  std::size_t count = 0;
  for (std::size_t m = 0; m < etas.size(); ++m)
    for (std::size_t j = 0; j < etas.size(); ++j) {
      if (j == m) continue;
      for (int h = 1; h <= n - 3; ++h)
        if (Rational(n - 3) * etas[m] == Rational(h) * etas[j]) {
          if (count < 8)
            v.note += (v.note.empty() ? "" : "; ") + std::string("m=") + std::to_string(m) +
                      " j=" + std::to_string(j) + " h=" + std::to_string(h);
          ++count;
        }
    }
  v.residual_exact = Rational(static_cast<long>(count));
  v.residual_float = static_cast<double>(count);
  v.pass = count == 0;
  if (v.pass) v.note = "no coincidences";
  return v;
}

Rational directional_value(const RationalPoint& y, const Polynomial& p, const RationalPoint& x) {
  return evaluate(directional_pairing(y, p), x);
}

bool BalanceReport::pass() const {
  return std::all_of(groups.begin(), groups.end(), [](const ViolationReport& v) { return v.pass; });
}

BalanceReport multi_point_balance(const BlowupConfiguration& config, double rel_tol) {
  config.validate();
  const int n = config.n;
  if (n <= 6) throw PreconditionError("multi_point_balance: n must exceed 6");
  BalanceReport rep;
  std::vector<Rational> distinct;
  for (std::size_t m = 1; m < config.points.size(); ++m)
    if (std::find(distinct.begin(), distinct.end(), config.flex_exponents[m]) == distinct.end())
      distinct.push_back(config.flex_exponents[m]);

  for (const Rational& eta : distinct) {
    ViolationReport v;
    v.constraint = "balance_group_eta_" + eta.get_str();
    v.tolerance = rel_tol;
    std::vector<Rational> pairings;
    std::vector<double> factors;
    std::vector<Rational> k_vals;
    for (std::size_t m = 1; m < config.points.size(); ++m) {
      if (config.flex_exponents[m] != eta) continue;
      pairings.push_back(directional_value(config.points[m], config.taylor_polys[m], config.flex_vectors[m]));
      // n(n-2) / (c~_n K) = 4 n (n-1) / K
      const Rational base = Rational(4 * n * (n - 1)) / config.k_values[m];
      const double w = std::pow(base.get_d(), 0.5 * n);
      const double s = std::pow(config.scale_ratios[m], (n - 3) * (1.0 + config.flex_exponents[m].get_d()));
      factors.push_back(w * s);
      k_vals.push_back(config.k_values[m]);
    }
    double sum = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < pairings.size(); ++i) {
      const double t = factors[i] * pairings[i].get_d();
      sum += t;
      scale += std::abs(t);
    }
    v.residual_float = sum;
    const bool common = std::all_of(factors.begin(), factors.end(), [&](double f) { return f == factors[0]; }) &&
                        std::all_of(k_vals.begin(), k_vals.end(), [&](const Rational& k) { return k == k_vals[0]; });
    if (common) {
      Rational exact = 0;
      for (const auto& q : pairings) exact += q;
      v.residual_exact = exact;
      v.pass = exact == 0;
      v.note = std::to_string(pairings.size()) + " point(s); common weight, exact pairing sum";
    } else {
      v.pass = scale == 0.0 || std::abs(sum) <= rel_tol * scale;
      v.note = std::to_string(pairings.size()) + " point(s); relative residual " +
               std::to_string(scale == 0.0 ? 0.0 : std::abs(sum) / scale);
    }
    if (pairings.size() == 1) v.note += "; singleton group";
    rep.groups.push_back(v);
  }
  return rep;
}

PohozaevReport pohozaev_volume_vs_surface(const PointFn& v, const GradFn& grad_v, const PointFn& k,
                                          const GradFn& grad_k, int n, double rho, double rel_tol,
                                          double abs_tol, int radial_points, int polar_points, Exec exec) {
  if (n < 3) throw PreconditionError("pohozaev: n must be at least 3");
  if (!(rho > 0.0)) throw PreconditionError("pohozaev: rho must be positive");
  const double crit = 2.0 * n / (n - 2.0);
  const double ct = c_tilde_of(n);
  PohozaevReport out;
  out.volume = ball_integral(
      [&](const std::vector<double>& y) {
        const std::vector<double> gk = grad_k(y);
        double ydk = 0.0;
        for (int i = 0; i < n; ++i) ydk += y[i] * gk[i];
        return ydk * std::pow(v(y), crit);
      },
      n, rho, radial_points, polar_points, exec);

  const std::vector<double> origin(n, 0.0);
  const double surface = sphere_integral(
      [&](const std::vector<double>& y) {
        const double vy = v(y);
        const std::vector<double> gv = grad_v(y);
        double g2 = 0.0, ydv = 0.0;
        for (int i = 0; i < n; ++i) {
          g2 += gv[i] * gv[i];
          ydv += y[i] * gv[i];
        }
        // With normal y / rho: <y, nu> = rho and <grad v, nu> = <y, grad v> / rho.
        const double dn = ydv / rho;
        return 0.5 * (n - 2) * vy * dn - 0.5 * g2 * rho + ydv * dn +
               (n - 2.0) / (2.0 * n) * ct * std::pow(vy, crit) * k(y) * rho;
      },
      origin, rho, polar_points, exec);
  out.flux = surface * crit / ct;

  ViolationReport& rep = out.report;
  rep.constraint = "pohozaev_mezzo";
  rep.residual_float = std::abs(out.volume - out.flux);
  rep.tolerance = rel_tol;
  const double mag = std::max(std::abs(out.volume), std::abs(out.flux));
  if (std::abs(out.volume) < abs_tol && std::abs(out.flux) < abs_tol) {
    rep.pass = true;
    rep.note = "both sides below absolute tolerance";
  } else {
    rep.pass = rep.residual_float <= rel_tol * mag;
    rep.note = "relative gap " + std::to_string(mag > 0.0 ? rep.residual_float / mag : 0.0);
  }
  return out;
}

}  // namespace bc
