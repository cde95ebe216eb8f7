#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grasph/rational.hpp"
#include "grasph/space.hpp"
#include "grasph/spherical.hpp"

namespace grasph {

enum class Verdict { kConverging, kDiverging, kInconclusive };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& text);

/// Verdict margin around the critical shell exponent -1: converging needs a
/// tail exponent below -1 - margin, diverging at least -1 + margin.
inline constexpr double kVerdictMargin = 0.15;

/// Truncated spectral series sum_lambda d~_lambda (1+kappa_lambda)^s
/// |phi_lambda(a)|^{2k}, accumulated shell by shell (shell = value of n_1).
struct SeriesReport {
  int p = 0;
  int q = 0;
  std::string point;
  int k = 1;
  Rational s;
  long n_max = 0;
  std::vector<long> shells;          // q-1 .. n_max
  std::vector<double> shell_sums;    // aligned with shells
  std::vector<double> partial_sums;  // running totals, non-decreasing
  double tail_exponent = 0.0;        // log-log slope over the last half of shells
  Verdict verdict = Verdict::kInconclusive;
  /// Normalizer points are refused: the series diverges for every k and is
  /// reported as such without computation.
  bool normalizer_refused = false;
  /// d_lambda is the restricted-root degree surrogate d~; verdicts depend
  /// only on polynomial growth rates, which the surrogate matches.
  std::string degree_model = "restricted-root degree surrogate";
};

/// Runs the sweep at one point.  Weights inside a shell are evaluated in
/// parallel and reduced in enumeration order, so shell_sums are bitwise
/// identical for any thread count.
SeriesReport series_sweep(const GrassmannianSpace& space, const TorusPoint& point,
                          int k, const Rational& s, long n_max,
                          unsigned threads = 0);

/// Smallest k <= k_cap whose sweep converges; nullopt when none does (or the
/// point sits in the normalizer).  Throws "inconclusive at boundary" when the
/// first non-diverging k cannot be decided at the margin.
std::optional<int> k_min_search(const GrassmannianSpace& space,
                                const TorusPoint& point, const Rational& s,
                                int k_cap, long n_max, unsigned threads = 0);

/// Smallest integers strictly exceeding each published sufficiency threshold.
struct ThresholdRecord {
  int k_main = 1;     // k > max(s+p, 2(p-q)+3), or max(2s+2p, 6) when p = q
  int k_regular = 1;  // 2 when p > q, 3 when p = q (regular points, s = 0)
  int k_prior = 1;    // k > (1 + binom(p+q,2) + 2s)/(2p-q)
  int k_sobolev = 1;  // k > (p+s)/(p-1/2) (regular points)
};

ThresholdRecord thresholds(const GrassmannianSpace& space, const Rational& s);

}  // namespace grasph
