#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grasph/rational.hpp"

namespace grasph {

/// Integer-parameter Jacobi polynomial P_n^{(a,b)}.  Only a, b >= 0 ever
/// arise here: the upper parameter is a rank gap plus a derivative shift.
struct JacobiParams {
  long a = 0;
  long b = 0;
  long n = 0;
};

/// Degrees above this are refused ("degree limit").  The recurrence itself
/// is fine far beyond, but the engine never needs more and the guard catches
/// runaway sweeps.
inline constexpr long kMaxJacobiDegree = 100000;

namespace detail {

inline void check_params(const JacobiParams& p) {
  if (p.a < 0 || p.b < 0 || p.n < 0)
    throw std::invalid_argument("jacobi parameters must be non-negative");
  if (p.n > kMaxJacobiDegree) throw std::invalid_argument("degree limit");
}

template <typename T>
T from_int(std::int64_t v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(static_cast<long>(v));
  } else {
    return static_cast<T>(v);
  }
}

}  // namespace detail

/// Fills values[k] = P_k^{(a,b)}(x) for k = 0..n via the three-term
/// recurrence in the degree.  Exact when T is Rational.
template <typename T>
std::vector<T> jacobi_table(long a, long b, long n, const T& x) {
  detail::check_params({a, b, n});
  std::vector<T> values;
  values.reserve(static_cast<std::size_t>(n) + 1);
  values.push_back(T(1));
  if (n == 0) return values;
  // P_1 = (a - b + (a + b + 2) x) / 2
  T p1 = (detail::from_int<T>(a - b) + detail::from_int<T>(a + b + 2) * x) / T(2);
  values.push_back(p1);
  for (long m = 2; m <= n; ++m) {
    const std::int64_t s = 2 * m + a + b;
    const std::int64_t c0 = 2 * m * (m + a + b) * (s - 2);
    const std::int64_t c1 = (s - 1) * s * (s - 2);
    const std::int64_t c2 = (s - 1) * (a * a - b * b);
    const std::int64_t c3 = 2 * (m + a - 1) * (m + b - 1) * s;
    T next = ((detail::from_int<T>(c1) * x + detail::from_int<T>(c2)) * values[m - 1] -
              detail::from_int<T>(c3) * values[m - 2]) /
             detail::from_int<T>(c0);
    values.push_back(next);
  }
  return values;
}

/// P_n^{(a,b)}(x).  Exact in Rational mode; in floating mode intended for
/// |x| <= 1 where the recurrence is stable.
template <typename T>
T jacobi_eval(const JacobiParams& params, const T& x) {
  detail::check_params(params);
  if (params.n == 0) return T(1);
  return jacobi_table(params.a, params.b, params.n, x).back();
}

/// order-th derivative of P_n^{(a,b)} at x, via the derivative identity
/// d/dx P_n^{(a,b)} = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)} applied repeatedly.
/// Returns 0 once the degree is exhausted (n < order).
template <typename T>
T jacobi_derivative(const JacobiParams& params, long order, const T& x) {
  detail::check_params(params);
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (order == 0) return jacobi_eval(params, x);
  if (params.n < order) return T(0);
  T factor(1);
  for (long i = 1; i <= order; ++i)
    factor *= detail::from_int<T>(params.n + params.a + params.b + i);
  factor /= rational_pow(T(2), order);
  JacobiParams shifted{params.a + order, params.b + order, params.n - order};
  return factor * jacobi_eval(shifted, x);
}

/// Normalization constant P_n^{(gap,0)}(1) = binom(n+gap, n).
inline Integer normalized_jacobi_denominator(long pq_gap, long n) {
  if (pq_gap < 0 || n < 0)
    throw std::invalid_argument("jacobi parameters must be non-negative");
  return binomial(static_cast<unsigned long>(n + pq_gap),
                  static_cast<unsigned long>(n));
}

/// Normalized Jacobi polynomial P~_n(x) = P_n^{(gap,0)}(x) / P_n^{(gap,0)}(1),
/// so P~_n(1) = 1 exactly.
template <typename T>
T normalized_jacobi(long pq_gap, long n, const T& x) {
  Integer denom = normalized_jacobi_denominator(pq_gap, n);
  T value = jacobi_eval<T>({pq_gap, 0, n}, x);
  if constexpr (std::is_same_v<T, Rational>) {
    return value / Rational(denom);
  } else {
    return value / static_cast<T>(denom.get_d());
  }
}

/// order-th derivative of P~_n at x:
///   2^{-order} (n+gap+1)...(n+gap+order) P_{n-order}^{(gap+order,order)}(x)
///   / P_n^{(gap,0)}(1),
/// and 0 when the shifted degree n - order is negative.
template <typename T>
T normalized_jacobi_derivative(long pq_gap, long n, long order, const T& x) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (n < 0 || pq_gap < 0)
    throw std::invalid_argument("jacobi parameters must be non-negative");
  if (n < order) return T(0);
  T value = jacobi_derivative<T>({pq_gap, 0, n}, order, x);
  Integer denom = normalized_jacobi_denominator(pq_gap, n);
  if constexpr (std::is_same_v<T, Rational>) {
    return value / Rational(denom);
  } else {
    return value / static_cast<T>(denom.get_d());
  }
}

}  // namespace grasph
