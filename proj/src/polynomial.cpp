#include "bubblecorr/polynomial.hpp"

#include <numeric>
#include <sstream>

namespace bc {

int total_degree(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

bool GrevlexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

DimensionMismatch::DimensionMismatch(int a, int b)
    : std::invalid_argument("polynomial dimension mismatch: " + std::to_string(a) +
                            " vs " + std::to_string(b)) {}

Polynomial::Polynomial(int dimension) : dim_(dimension) {
  if (dimension < 1) throw std::invalid_argument("polynomial dimension must be positive");
}

Polynomial Polynomial::constant(int dimension, const Rational& c) {
  Polynomial p(dimension);
  p.add_term(MultiIndex(dimension, 0), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, const Rational& c) {
  Polynomial p(static_cast<int>(alpha.size()));
  p.add_term(alpha, c);
  return p;
}

Polynomial Polynomial::variable(int dimension, int i) {
  MultiIndex alpha(dimension, 0);
  alpha.at(i) = 1;
  return monomial(alpha);
}

Polynomial Polynomial::r2(int dimension) {
  Polynomial p(dimension);
  for (int i = 0; i < dimension; ++i) {
    MultiIndex alpha(dimension, 0);
    alpha[i] = 2;
    p.add_term(alpha, 1);
  }
  return p;
}

std::optional<int> Polynomial::degree() const {
  if (terms_.empty()) return std::nullopt;
  return total_degree(terms_.rbegin()->first);
}

std::optional<int> Polynomial::min_degree() const {
  if (terms_.empty()) return std::nullopt;
  return total_degree(terms_.begin()->first);
}

bool Polynomial::is_homogeneous() const {
  return terms_.empty() || *degree() == *min_degree();
}

Rational Polynomial::coefficient(const MultiIndex& alpha) const {
  check_alpha(alpha);
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::check_alpha(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != dim_)
    throw DimensionMismatch(dim_, static_cast<int>(alpha.size()));
  for (int a : alpha)
    if (a < 0) throw std::invalid_argument("negative exponent in multi-index");
}

void Polynomial::add_term(const MultiIndex& alpha, const Rational& c) {
  if (c == 0) return;
  check_alpha(alpha);
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::homogeneous_part(int d) const {
  Polynomial out(dim_);
  for (const auto& [alpha, c] : terms_)
    if (total_degree(alpha) == d) out.terms_.emplace_hint(out.terms_.end(), alpha, c);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.dim_ != dim_) throw DimensionMismatch(dim_, other.dim_);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.dim_ != dim_) throw DimensionMismatch(dim_, other.dim_);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, coef] : terms_) coef *= c;
  return *this;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.dim_ == b.dim_ && a.terms_ == b.terms_;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch(a.dimension(), b.dimension());
  const int n = a.dimension();
  Polynomial out(n);
  MultiIndex gamma(n);
  for (const auto& [alpha, ca] : a.terms()) {
    for (const auto& [beta, cb] : b.terms()) {
      for (int i = 0; i < n; ++i) gamma[i] = alpha[i] + beta[i];
      out.add_term(gamma, ca * cb);
    }
  }
  return out;
}

Polynomial partial(const Polynomial& p, int i) {
  const int n = p.dimension();
  if (i < 0 || i >= n) throw std::out_of_range("partial: variable index out of range");
  Polynomial out(n);
  for (const auto& [alpha, c] : p.terms()) {
    if (alpha[i] == 0) continue;
    MultiIndex beta = alpha;
    beta[i] -= 1;
    out.add_term(beta, c * alpha[i]);
  }
  return out;
}

Polynomial laplacian(const Polynomial& p) {
  const int n = p.dimension();
  Polynomial out(n);
  for (const auto& [alpha, c] : p.terms()) {
    for (int i = 0; i < n; ++i) {
      if (alpha[i] < 2) continue;
      MultiIndex beta = alpha;
      beta[i] -= 2;
      out.add_term(beta, c * (alpha[i] * (alpha[i] - 1)));
    }
  }
  return out;
}

Polynomial iterated_laplacian(const Polynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("iterated_laplacian: k must be non-negative");
  Polynomial out = p;
  for (int i = 0; i < k && !out.is_zero(); ++i) out = laplacian(out);
  return out;
}

Polynomial euler_operator(const Polynomial& p) {
  Polynomial out(p.dimension());
  for (const auto& [alpha, c] : p.terms()) out.add_term(alpha, c * total_degree(alpha));
  return out;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.dimension());
  for (int i = 0; i < p.dimension(); ++i) g.push_back(partial(p, i));
  return g;
}

Polynomial r2_multiply(const Polynomial& p, int j) {
  if (j < 0) throw std::invalid_argument("r2_multiply: j must be non-negative");
  const int n = p.dimension();
  Polynomial out = p;
  for (int step = 0; step < j; ++step) {
    Polynomial next(n);
    for (const auto& [alpha, c] : out.terms()) {
      for (int i = 0; i < n; ++i) {
        MultiIndex beta = alpha;
        beta[i] += 2;
        next.add_term(beta, c);
      }
    }
    out = std::move(next);
  }
  return out;
}

Polynomial directional_pairing(const std::vector<Rational>& x, const Polynomial& p) {
  const int n = p.dimension();
  if (static_cast<int>(x.size()) != n) throw DimensionMismatch(n, static_cast<int>(x.size()));
  Polynomial out(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    out += partial(p, i) * x[i];
  }
  return out;
}

Rational evaluate(const Polynomial& p, const std::vector<Rational>& point) {
  const int n = p.dimension();
  if (static_cast<int>(point.size()) != n)
    throw DimensionMismatch(n, static_cast<int>(point.size()));
  Rational sum = 0;
  Rational term;
  for (const auto& [alpha, c] : p.terms()) {
    term = c;
    for (int i = 0; i < n; ++i)
      for (int e = 0; e < alpha[i]; ++e) term *= point[i];
    sum += term;
  }
  return sum;
}

double evaluate(const Polynomial& p, const std::vector<double>& point) {
  const int n = p.dimension();
  if (static_cast<int>(point.size()) != n)
    throw DimensionMismatch(n, static_cast<int>(point.size()));
  double sum = 0.0;
  for (const auto& [alpha, c] : p.terms()) {
    double term = c.get_d();
    for (int i = 0; i < n; ++i)
      for (int e = 0; e < alpha[i]; ++e) term *= point[i];
    sum += term;
  }
  return sum;
}

namespace {

// Binomial expansion of (y_i + s)^e as a list of (power of y_i, coefficient).
std::vector<std::pair<int, Rational>> binomial_row(int e, const Rational& s) {
  std::vector<std::pair<int, Rational>> row;
  Integer binom = 1;
  Rational spow = 1;
  std::vector<Rational> spows(e + 1);
  for (int k = 0; k <= e; ++k) {
    spows[k] = spow;
    spow *= s;
  }
  for (int k = 0; k <= e; ++k) {
    // coefficient of y^k is C(e,k) s^(e-k)
    Rational c = Rational(binom) * spows[e - k];
    if (c != 0) row.emplace_back(k, c);
    binom = binom * (e - k) / (k + 1);
  }
  return row;
}

}  // namespace

Polynomial translate(const Polynomial& p, const std::vector<Rational>& shift) {
  const int n = p.dimension();
  if (static_cast<int>(shift.size()) != n)
    throw DimensionMismatch(n, static_cast<int>(shift.size()));
  Polynomial out(n);
  for (const auto& [alpha, c] : p.terms()) {
    Polynomial acc = Polynomial::constant(n, c);
    for (int i = 0; i < n; ++i) {
      if (alpha[i] == 0) continue;
      Polynomial factor(n);
      for (const auto& [k, coef] : binomial_row(alpha[i], shift[i])) {
        MultiIndex beta(n, 0);
        beta[i] = k;
        factor.add_term(beta, coef);
      }
      acc = acc * factor;
    }
    out += acc;
  }
  return out;
}

Polynomial signed_permute(const Polynomial& p, const std::vector<int>& perm,
                          const std::vector<int>& signs) {
  const int n = p.dimension();
  if (static_cast<int>(perm.size()) != n || static_cast<int>(signs.size()) != n)
    throw DimensionMismatch(n, static_cast<int>(perm.size()));
  Polynomial out(n);
  for (const auto& [alpha, c] : p.terms()) {
    MultiIndex beta(n, 0);
    Rational coef = c;
    for (int i = 0; i < n; ++i) {
      beta[perm[i]] += alpha[i];
      if (signs[i] < 0 && alpha[i] % 2 == 1) coef = -coef;
    }
    out.add_term(beta, coef);
  }
  return out;
}

Polynomial embed(const Polynomial& p, int total, int offset) {
  const int n = p.dimension();
  if (offset < 0 || offset + n > total) throw std::out_of_range("embed: slots out of range");
  Polynomial out(total);
  for (const auto& [alpha, c] : p.terms()) {
    MultiIndex beta(total, 0);
    for (int i = 0; i < n; ++i) beta[offset + i] = alpha[i];
    out.add_term(beta, c);
  }
  return out;
}

Polynomial bind_leading(const Polynomial& p, const std::vector<Rational>& x) {
  const int m = static_cast<int>(x.size());
  const int n = p.dimension() - m;
  if (n < 1) throw std::invalid_argument("bind_leading: nothing left to keep");
  Polynomial out(n);
  for (const auto& [alpha, c] : p.terms()) {
    Rational coef = c;
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < alpha[i]; ++e) coef *= x[i];
    out.add_term(MultiIndex(alpha.begin() + m, alpha.end()), coef);
  }
  return out;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [alpha, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rational mag = abs(c);
    const bool is_const = total_degree(alpha) == 0;
    if (mag != 1 || is_const) os << mag.get_str();
    bool need_sep = mag != 1 || is_const;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      if (need_sep) os << "*";
      os << "y" << (i + 1);
      if (alpha[i] > 1) os << "^" << alpha[i];
      need_sep = true;
    }
  }
  return os.str();
}

}  // namespace bc
