#pragma once

#include <span>
#include <string>
#include <vector>

#include "grasph/space.hpp"
#include "grasph/spherical.hpp"

namespace grasph {

/// Decay envelopes for |phi_lambda|, one per published estimate, with the
/// constant fixed at 1 (the sweep's supremum is the empirical constant).
enum class BoundKind {
  kGeneralPqStrict,  // prod_{j<=q-1} (n_j+1)^{-1}, any non-normalizer point, p > q
  kGeneralPqEqual,   // prod_{j<=q-1} (n_j+1)^{-1/2}, p = q
  kRegular,          // prod_j (n_j+1)^{-p+j-1/2}, regular points
  kFlatInterior,     // prod_{j<=q-1} (n_j+r)^{-p+q-1/2} (n_q+1)^{-p+q}, all cos equal, != +-1
  kMinusOne,         // prod_j (n_j+r)^{-(p-q)}, all cos = -1, p > q
  kPriorRegular,     // prod_j (n_j+1)^{-p+q/2}, the earlier regular-point bound
};

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& text);

/// Envelope value with C = 1.  Throws "kind/space mismatch" when the kind
/// needs p > q (or p = q) and the space disagrees.
double envelope(BoundKind kind, const GrassmannianSpace& space,
                const SphericalWeight& w);

struct RatioSweepReport {
  BoundKind kind = BoundKind::kRegular;
  int p = 0;
  int q = 0;
  std::string point;
  long n_max = 0;
  /// max over the shell n_1 = s of |phi|/envelope; index s-1 holds shell s.
  /// Shells with no weights stay 0 and are skipped by the slope fit.
  std::vector<double> max_ratio_per_shell;
  double overall_sup = 0.0;
  double log_log_slope = 0.0;
};

/// Least-squares slope of log(max) against log(shell index); zero shells are
/// ignored.  Requires at least 8 non-zero shells ("insufficient data").
double slope_estimate(std::span<const double> shell_maxima);

/// Sweeps every weight with n_1 <= n_max at the point and reports the ratio
/// |phi_lambda(point)| / envelope per shell.  The point class must match the
/// kind ("kind/space mismatch" otherwise).  Weights are evaluated in
/// parallel; shell maxima are a commutative max-reduction, so the report is
/// identical for any thread count.
RatioSweepReport ratio_sweep(BoundKind kind, const GrassmannianSpace& space,
                             const TorusPoint& point, long n_max,
                             unsigned threads = 0);

}  // namespace grasph
