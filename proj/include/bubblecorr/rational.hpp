#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace bc {

// Arbitrary-precision rational, kept in canonical form after every operation.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational rational_from_strings(const std::string& num, const std::string& den) {
  Rational q{Integer(num), Integer(den)};
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
  q.canonicalize();
  return q;
}

// Exact conversion of a finite double.
inline Rational rational_from_double(double x) { return Rational(x); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace bc
