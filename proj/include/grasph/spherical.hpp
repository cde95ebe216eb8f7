#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grasph/rational.hpp"
#include "grasph/space.hpp"

namespace grasph {

/// Leading constant of the determinant formula:
///   C_{p,q} = 2^{q(q-1)/2} prod_{j=1}^{q-1} j! (j+p-q)^{q-j}.
Integer c_pq(const GrassmannianSpace& space);

enum class EvalMode { kAuto, kGeneric, kConfluent, kOracle };
enum class EvalPath { kGeneric, kConfluent, kMinusOneClosedForm, kOracle };

std::string to_string(EvalMode mode);
std::string to_string(EvalPath path);
EvalMode eval_mode_from_string(const std::string& text);

struct EvalRequest {
  const GrassmannianSpace* space = nullptr;
  SphericalWeight weight = SphericalWeight::from_m({0, 0});
  TorusPoint point;
  EvalMode mode = EvalMode::kAuto;
};

struct EvalResult {
  double value = 0.0;
  EvalPath path_taken = EvalPath::kGeneric;
  /// Reciprocal of the smallest Vandermonde node gap used (generic path);
  /// +inf flags the confluent limit path, 0 the gap-free closed form.
  double condition_estimate = 0.0;
  std::vector<std::string> warnings;
};

/// Below this node gap the generic quotient is considered numerically
/// untrustworthy and auto evaluation switches to the block-collapsed
/// confluent limit.
inline constexpr double kNearConfluentGap = 1e-6;

/// Result of anchoring the confluent-limit constant against the exact
/// normalization phi_lambda(identity) = 1.
struct CalibrationRecord {
  int p = 0;
  int q = 0;
  /// Multiplier for the divided-difference pipeline; the algebra predicts 1.
  Rational global_constant;
  /// Net constant of the plain-derivative determinant form (the published
  /// confluent formula), excluding C_{p,q}.
  Rational eq3_constant;
  bool matches_paper_constant = false;      // |eq3| == 1/(q-1)!
  bool matches_classical_constant = false;  // |eq3| == 1/(1!2!...(q-1)!)
  /// True when the plain-derivative form normalizes only with the C_{p,q}
  /// factor included.
  bool eq3_requires_cpq = false;
  /// Closed-form constant at the all-(-1) point (p > q only):
  ///   phi = kappa * (-1)^{sum n_j} / prod_j binom(n_j + p - q, n_j).
  Rational minus_one_kappa;
  int sample_count = 0;
  bool consistent = false;
};

/// Determines the confluent constant empirically from phi_lambda(e) = 1 over
/// the sample weights, in exact arithmetic.  Throws "inconsistent
/// calibration" when samples disagree.
CalibrationRecord calibrate_constants(const GrassmannianSpace& space,
                                      std::span<const SphericalWeight> samples);

/// Cached per-(p,q) record used by all confluent evaluations.
const CalibrationRecord& calibration_for(const GrassmannianSpace& space);

/// Evaluates phi_lambda(exp iX) at one torus point for many weights.
/// prepare() builds node tables up to a weight degree; evaluations are const
/// and safe to run concurrently once prepared.
class SphericalEvaluator {
 public:
  SphericalEvaluator(const GrassmannianSpace& space, TorusPoint point);
  ~SphericalEvaluator();
  SphericalEvaluator(SphericalEvaluator&&) noexcept;
  SphericalEvaluator& operator=(SphericalEvaluator&&) noexcept;

  const TorusPoint& point() const;
  const GrassmannianSpace& space() const;

  /// Builds floating node tables for all weights with n_1 <= n_max.
  void prepare(long n_max);
  /// Builds exact node tables; throws "irrational node" when a block lacks
  /// an exact rational cos 2t.
  void prepare_exact(long n_max);

  /// Plain determinant quotient; requires all blocks singleton.
  EvalResult eval_generic(const SphericalWeight& w) const;
  /// Block-confluent limit via divided-difference derivative columns.
  EvalResult eval_confluent(const SphericalWeight& w) const;
  /// Closed form at the all-(-1) point; requires p > q.
  EvalResult eval_minus_one(const SphericalWeight& w) const;
  /// Routes to the appropriate path; near-confluent floating nodes fall back
  /// to the block-collapsed confluent limit with a condition warning.
  EvalResult eval_auto(const SphericalWeight& w) const;

  /// Exact rational value of the full determinant expression, confluence
  /// handled by divided differences with repeated nodes.
  Rational oracle_exact(const SphericalWeight& w) const;

  /// Exact pipeline without the calibrated constant; calibration input.
  Rational oracle_raw(const SphericalWeight& w) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot helpers; each builds an evaluator sized to the request.
EvalResult evaluate(const EvalRequest& req);
EvalResult eval_generic(const EvalRequest& req);
EvalResult eval_confluent(const EvalRequest& req);
EvalResult eval_minus_one_closed_form(const EvalRequest& req);
EvalResult eval_auto(const EvalRequest& req);
Rational oracle_exact(const EvalRequest& req);

}  // namespace grasph
