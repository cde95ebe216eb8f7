#include "grasph/series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "grasph/parallel.hpp"

namespace grasph {

namespace {

double ipow(double base, long exponent) {
  double result = 1.0;
  double acc = base;
  for (long e = exponent; e > 0; e >>= 1) {
    if (e & 1) result *= acc;
    acc *= acc;
  }
  return result;
}

/// Least-squares slope of log(sum) vs log(shell) over the last half of the
/// shells, skipping empty sums.
double tail_slope(const std::vector<long>& shells, const std::vector<double>& sums) {
  const std::size_t start = shells.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long count = 0;
  bool any_positive = false;
  for (std::size_t i = start; i < shells.size(); ++i) {
    if (sums[i] <= 0.0) continue;
    any_positive = true;
    const double x = std::log(static_cast<double>(shells[i]));
    const double y = std::log(sums[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (!any_positive) return -std::numeric_limits<double>::infinity();
  if (count < 4) return std::numeric_limits<double>::quiet_NaN();
  const double det = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / det;
}

Verdict classify_tail(double tail) {
  if (std::isnan(tail)) return Verdict::kInconclusive;
  if (tail < -1.0 - kVerdictMargin) return Verdict::kConverging;
  if (tail >= -1.0 + kVerdictMargin) return Verdict::kDiverging;
  return Verdict::kInconclusive;
}

int exceed(const Rational& threshold) {
  // smallest integer strictly greater than threshold
  return static_cast<int>(floor_int(threshold).get_si()) + 1;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kConverging: return "converging";
    case Verdict::kDiverging: return "diverging";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& text) {
  if (text == "converging") return Verdict::kConverging;
  if (text == "diverging") return Verdict::kDiverging;
  if (text == "inconclusive") return Verdict::kInconclusive;
  throw std::invalid_argument("unknown verdict: '" + text + "'");
}

SeriesReport series_sweep(const GrassmannianSpace& space, const TorusPoint& point,
                          int k, const Rational& s, long n_max, unsigned threads) {
  if (k < 1) throw std::invalid_argument("convolution power k must be >= 1");
  if (s < 0) throw std::invalid_argument("Sobolev order s must be >= 0");

  SeriesReport report;
  report.p = space.p();
  report.q = space.q();
  report.point = point.to_string();
  report.k = k;
  report.s = s;
  report.n_max = n_max;

  if (point.in_normalizer()) {
    report.normalizer_refused = true;
    report.verdict = Verdict::kDiverging;
    report.tail_exponent = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  SphericalEvaluator ev(space, point);
  ev.prepare(n_max);
  const double s_d = to_double(s);
  const bool use_sobolev = (s != 0);

  double running = 0.0;
  for (long shell = space.q() - 1; shell <= n_max; ++shell) {
    const std::vector<SphericalWeight> weights = shell_weights(space, shell);
    std::vector<double> terms(weights.size(), 0.0);
    parallel_for_index(weights.size(), threads, [&](std::size_t i) {
      const SphericalWeight& w = weights[i];
      const double phi = ev.eval_auto(w).value;
      double term = degree_surrogate_d(space, w) * ipow(std::abs(phi), 2L * k);
      if (use_sobolev)
        term *= std::pow(1.0 + static_cast<double>(casimir(space, w)), s_d);
      terms[i] = term;
    });
    double sum = 0.0;
    for (double t : terms) sum += t;
    running += sum;
    report.shells.push_back(shell);
    report.shell_sums.push_back(sum);
    report.partial_sums.push_back(running);
  }

  report.tail_exponent = tail_slope(report.shells, report.shell_sums);
  report.verdict = classify_tail(report.tail_exponent);
  return report;
}

std::optional<int> k_min_search(const GrassmannianSpace& space,
                                const TorusPoint& point, const Rational& s,
                                int k_cap, long n_max, unsigned threads) {
  if (k_cap < 1) throw std::invalid_argument("k_cap must be >= 1");
  if (point.in_normalizer()) return std::nullopt;
  for (int k = 1; k <= k_cap; ++k) {
    const SeriesReport report = series_sweep(space, point, k, s, n_max, threads);
    if (report.verdict == Verdict::kConverging) return k;
    if (report.verdict == Verdict::kInconclusive)
      throw std::runtime_error("inconclusive at boundary");
    // diverging: |phi| <= 1 makes the series monotone in k, keep climbing
  }
  return std::nullopt;
}

ThresholdRecord thresholds(const GrassmannianSpace& space, const Rational& s) {
  if (s < 0) throw std::invalid_argument("Sobolev order s must be >= 0");
  const int p = space.p();
  const int q = space.q();
  ThresholdRecord rec;
  if (p > q) {
    Rational t_main = std::max(Rational(s + p), Rational(2 * (p - q) + 3));
    rec.k_main = exceed(t_main);
    rec.k_regular = 2;
  } else {
    Rational t_main = std::max(Rational(2 * s + 2 * p), Rational(6));
    rec.k_main = exceed(t_main);
    rec.k_regular = 3;
  }
  Rational binom_pq = Rational(binomial(p + q, 2));
  rec.k_prior = exceed((1 + binom_pq + 2 * s) / Rational(2 * p - q));
  rec.k_sobolev = exceed((p + s) / (Rational(p) - make_rational(1, 2)));
  return rec;
}

}  // namespace grasph
