#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace grasph {

/// Arbitrary-precision rational scalar, always stored in lowest terms with a
/// positive denominator.  Backed by GMP's mpq_class; all arithmetic on
/// canonical operands stays canonical.
using Rational = mpq_class;

/// Arbitrary-precision integer.
using Integer = mpz_class;

/// Builds a canonical rational from a numerator/denominator pair.
inline Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "a/b" or "a" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0)
    throw std::invalid_argument("malformed rational: '" + text + "'");
  r.canonicalize();
  if (r.get_den() == 0)
    throw std::invalid_argument("rational with zero denominator: '" + text + "'");
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Largest integer <= r.
inline Integer floor_int(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

inline Integer factorial(unsigned long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

/// 1! * 2! * ... * n!  (the classical confluent-Vandermonde constant).
inline Integer superfactorial(unsigned long n) {
  Integer s = 1;
  for (unsigned long k = 2; k <= n; ++k) s *= factorial(k);
  return s;
}

template <typename T>
T rational_pow(const T& base, long exponent) {
  if (exponent < 0) return T(1) / rational_pow(base, -exponent);
  T result(1);
  T acc = base;
  long e = exponent;
  while (e > 0) {
    if (e & 1) result *= acc;
    acc *= acc;
    e >>= 1;
  }
  return result;
}

}  // namespace grasph
