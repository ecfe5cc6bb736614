#include "bubblecorr/reduction.hpp"

#include "bubblecorr/linear_solve.hpp"

#include <set>

namespace bc {

GuardError::GuardError(int n, int ell, int j, int k, std::string root_)
    : std::runtime_error("characteristic denominator vanishes at (j,k) = (" + std::to_string(j) +
                         "," + std::to_string(k) + ") for n = " + std::to_string(n) +
                         ", ell = " + std::to_string(ell) + " via root " + root_ +
                         (n % 2 == 0 && ell >= n + 2 ? " (even n requires ell < n + 2)" : "")),
      j(j),
      k(k),
      root(std::move(root_)) {}

ResidueObstruction::ResidueObstruction(Polynomial r)
    : std::runtime_error("residue obstruction: Delta^(h) P is not identically zero"),
      residue(std::move(r)) {}

int h_of(int ell) {
  if (ell < 1) throw PreconditionError("h_of: ell must be positive");
  return ell / 2;
}

Rational a_multiplier(int n, int ell, int j, int k) {
  if (j < 0 || k < 0) throw PreconditionError("a_multiplier: j, k must be non-negative");
  return Rational(2 * j) * Rational(2 * j + n - 2 + 2 * ell - 4 * k);
}

Rational characteristic_denominator(int n, int ell, int j, int k) {
  return a_multiplier(n, ell, j, k) - Rational(2 * n) * Rational(ell + 2 * (j - k) - 1);
}

bool characteristic_guard(int n, int ell, int j, int k) {
  return characteristic_denominator(n, ell, j, k) != 0;
}

namespace {

// The denominator factors as (2j - n)(2j + 2(ell - 2k) - 2).
std::string guard_root(int n, int ell, int j, int k) {
  if (2 * j == n) return "j = n/2";
  if (j == (ell - 1) - 2 * (k - j)) return "j = (ell-1) - 2(k-j)";
  return "unclassified";
}

}  // namespace

std::vector<CellStep> table_build_order(int depth) {
  std::vector<CellStep> order;
  auto deps_of = [depth](int j, int k) {
    std::vector<Cell> deps;
    if (j >= 1 && k >= 1) deps.emplace_back(j - 1, k - 1);
    if (j <= k - 1) deps.emplace_back(j, k - 1);
    if (j + 1 <= k && k < depth) deps.emplace_back(j + 1, k);
    return deps;
  };
  for (int d = 0; d < depth; ++d) order.push_back({{d, d}, deps_of(d, d)});
  for (int k = 1; k < depth; ++k)
    for (int j = k - 1; j >= 0; --j) order.push_back({{j, k}, deps_of(j, k)});
  return order;
}

CoefficientTable coefficient_table(int n, int ell) { return coefficient_table(n, ell, h_of(ell)); }

CoefficientTable coefficient_table(int n, int ell, int depth) {
  if (n < 1) throw PreconditionError("coefficient_table: n must be positive");
  if (ell < 2) throw PreconditionError("coefficient_table: ell must be at least 2");
  const int h = h_of(ell);
  if (depth < 0 || depth > h) throw PreconditionError("coefficient_table: depth out of range");

  CoefficientTable t;
  t.n = n;
  t.ell = ell;
  t.h = h;
  t.depth = depth;
  t.order = table_build_order(depth);

  for (const auto& step : t.order) {
    const auto [j, k] = step.cell;
    for (const auto& dep : step.deps)
      if (!t.C.count(dep))
        throw std::logic_error("coefficient table dependency (" + std::to_string(dep.first) + "," +
                               std::to_string(dep.second) + ") not yet set when building (" +
                               std::to_string(j) + "," + std::to_string(k) + ")");
    const Rational denom = characteristic_denominator(n, ell, j, k);
    t.A[{j, k}] = a_multiplier(n, ell, j, k);
    t.denominator[{j, k}] = denom;
    if (denom == 0) throw GuardError(n, ell, j, k, guard_root(n, ell, j, k));

    // Coefficient of (R^2)^j Delta^k P in apply_L of the table sum:
    // C^j_k * denom + C^{j-1}_{k-1} + C^j_{k-1} + C^{j+1}_k * A_{ell,j+1,k}.
    Rational rhs = (j == 0 && k == 0) ? Rational(1) : Rational(0);
    if (j >= 1 && k >= 1) rhs -= t.C.at({j - 1, k - 1});
    if (j <= k - 1) rhs -= t.C.at({j, k - 1});
    if (j + 1 <= k) rhs -= t.C.at({j + 1, k}) * a_multiplier(n, ell, j + 1, k);
    Rational c = rhs / denom;
    t.C[{j, k}] = c;
  }

  if (depth == h && h >= 1) {
    t.residues.assign(h + 1, Rational(0));
    t.residues[h] = t.C.at({h - 1, h - 1});
    for (int m = 1; m <= h - 1; ++m) t.residues[m] = t.C.at({m, h - 1}) + t.C.at({m - 1, h - 1});
    t.residues[0] = t.C.at({0, h - 1});
  }
  return t;
}

Polynomial apply_L(const Polynomial& g) {
  const int n = g.dimension();
  const Polynomial lap = laplacian(g);
  Polynomial out = lap + r2_multiply(lap, 1);
  out -= euler_operator(g) * Rational(2 * n);
  out += g * Rational(2 * n);
  return out;
}

int vanishing_order(const Polynomial& p) {
  int k = 0;
  Polynomial d = p;
  while (!d.is_zero()) {
    d = laplacian(d);
    ++k;
  }
  return k;
}

Polynomial assemble_from_table(const CoefficientTable& table, const Polynomial& p) {
  Polynomial g(p.dimension());
  Polynomial dk = p;
  for (int k = 0; k < table.depth; ++k) {
    for (int j = 0; j <= k; ++j) g += r2_multiply(dk, j) * table.coefficient(j, k);
    dk = laplacian(dk);
  }
  return g;
}

namespace {

int checked_degree(const Polynomial& p, const char* who) {
  if (p.is_zero()) throw PreconditionError(std::string(who) + ": polynomial is zero");
  if (!p.is_homogeneous()) throw PreconditionError(std::string(who) + ": polynomial is not homogeneous");
  const int ell = *p.degree();
  if (ell < 2) throw PreconditionError(std::string(who) + ": degree must be at least 2");
  return ell;
}

void check_even_dimension_bound(int n, int ell, const char* who) {
  if (n % 2 == 0 && ell >= n + 2)
    throw PreconditionError(std::string(who) + ": for even n the degree must satisfy ell < n + 2");
}

}  // namespace

Polynomial residue_terms(const Polynomial& p) {
  const int ell = checked_degree(p, "residue_terms");
  const int n = p.dimension();
  const CoefficientTable t = coefficient_table(n, ell);
  const Polynomial dh = iterated_laplacian(p, t.h);
  Polynomial out(n);
  if (dh.is_zero()) return out;
  for (int m = 0; m <= t.h; ++m) out += r2_multiply(dh, m) * t.residues[m];
  return out;
}

Polynomial CorrectionSolution::total() const {
  return radial_completion ? gamma + *radial_completion : gamma;
}

CorrectionSolution solve_gamma(const Polynomial& p) {
  const int ell = checked_degree(p, "solve_gamma");
  const int n = p.dimension();
  check_even_dimension_bound(n, ell, "solve_gamma");
  const int h = h_of(ell);
  if (!iterated_laplacian(p, h).is_zero()) throw ResidueObstruction(residue_terms(p));

  const int k0 = vanishing_order(p);
  const CoefficientTable t = coefficient_table(n, ell, std::min(h, k0));
  CorrectionSolution sol{assemble_from_table(t, p), std::nullopt, k0, false, true, n, ell};
  if (!(apply_L(sol.gamma) == p)) throw std::logic_error("solve_gamma: exact verification failed");
  sol.verified = true;
  return sol;
}

Polynomial radial_completion(int n, int ell, const std::vector<Rational>& residue_coefficients) {
  if (n < 4 || n % 2 != 0 || ell % 2 != 0 || ell < 2 || ell > n - 2)
    throw PreconditionError(
        "radial_completion requires n >= 4 even and an even degree 2 <= ell <= n - 2");
  const int top = n / 2;
  Polynomial f(n);
  Rational prev = 0;
  for (int k = 1; k <= top; ++k) {
    const Rational r = k - 1 < static_cast<int>(residue_coefficients.size())
                           ? residue_coefficients[k - 1]
                           : Rational(0);
    const Rational num = r + Rational((2 * k - 4) * (2 * k - 2 - n)) * prev;
    const Rational b = -num / Rational((2 * k) * (2 * k + n - 2));
    f += r2_multiply(Polynomial::constant(n, 1), k) * b;
    prev = b;
  }
  return f;
}

CorrectionSolution solve_general(const Polynomial& p) {
  const int ell = checked_degree(p, "solve_general");
  const int n = p.dimension();
  const int h = h_of(ell);
  const Polynomial dh = iterated_laplacian(p, h);
  if (dh.is_zero()) return solve_gamma(p);
  if (n < 4 || n % 2 != 0 || ell % 2 != 0 || ell > n - 2)
    throw UnsolvableError(
        "residue is nonzero and the radial completion needs n >= 4 even with even ell <= n - 2");

  const CoefficientTable t = coefficient_table(n, ell);
  const Rational dh_value = dh.coefficient(MultiIndex(n, 0));
  std::vector<Rational> coeffs(t.residues.size());
  for (std::size_t m = 0; m < coeffs.size(); ++m) coeffs[m] = dh_value * t.residues[m];

  CorrectionSolution sol{assemble_from_table(t, p), radial_completion(n, ell, coeffs),
                         vanishing_order(p), false, false, n, ell};
  if (!(apply_L(sol.total()) == p)) throw std::logic_error("solve_general: exact verification failed");
  sol.verified = true;
  return sol;
}

Polynomial project_to_admissible(const Polynomial& p) {
  const int ell = checked_degree(p, "project_to_admissible");
  const int n = p.dimension();
  const int h = h_of(ell);
  const Polynomial dh = iterated_laplacian(p, h);
  if (dh.is_zero()) return p;
  const Polynomial one = Polynomial::constant(n, 1);
  if (ell % 2 == 0) {
    const Polynomial rl = r2_multiply(one, h);
    const Rational c = dh.coefficient(MultiIndex(n, 0)) /
                       iterated_laplacian(rl, h).coefficient(MultiIndex(n, 0));
    return p - rl * c;
  }
  // Delta^h (y_i R^{2h}) = kappa y_i with kappa independent of i.
  const Polynomial probe = iterated_laplacian(r2_multiply(Polynomial::variable(n, 0), h), h);
  MultiIndex e1(n, 0);
  e1[0] = 1;
  const Rational kappa = probe.coefficient(e1);
  Polynomial out = p;
  for (int i = 0; i < n; ++i) {
    MultiIndex ei(n, 0);
    ei[i] = 1;
    const Rational ci = dh.coefficient(ei);
    if (ci != 0) out -= r2_multiply(Polynomial::variable(n, i), h) * (ci / kappa);
  }
  return out;
}

std::vector<Polynomial> kernel_basis(int n) {
  std::vector<Polynomial> basis;
  for (int i = 0; i < n; ++i) basis.push_back(Polynomial::variable(n, i));
  basis.push_back(Polynomial::r2(n) - Polynomial::constant(n, 1));
  return basis;
}

std::optional<std::vector<Rational>> kernel_decomposition(const Polynomial& d) {
  const int n = d.dimension();
  const auto basis = kernel_basis(n);
  std::set<MultiIndex, GrevlexLess> monomials;
  for (const auto& [alpha, c] : d.terms()) monomials.insert(alpha);
  for (const auto& b : basis)
    for (const auto& [alpha, c] : b.terms()) monomials.insert(alpha);

  RationalMatrix a;
  std::vector<Rational> rhs;
  for (const auto& alpha : monomials) {
    std::vector<Rational> row;
    for (const auto& b : basis) row.push_back(b.coefficient(alpha));
    a.push_back(std::move(row));
    rhs.push_back(d.coefficient(alpha));
  }
  return solve_exact(std::move(a), std::move(rhs)).solution;
}

}  // namespace bc
