#include "grasph/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "grasph/parallel.hpp"

namespace grasph {

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kGeneralPqStrict: return "general_pq_strict";
    case BoundKind::kGeneralPqEqual: return "general_pq_equal";
    case BoundKind::kRegular: return "regular";
    case BoundKind::kFlatInterior: return "flat_interior";
    case BoundKind::kMinusOne: return "minus_one";
    case BoundKind::kPriorRegular: return "prior_regular";
  }
  return "?";
}

BoundKind bound_kind_from_string(const std::string& text) {
  if (text == "general_pq_strict") return BoundKind::kGeneralPqStrict;
  if (text == "general_pq_equal") return BoundKind::kGeneralPqEqual;
  if (text == "regular") return BoundKind::kRegular;
  if (text == "flat_interior") return BoundKind::kFlatInterior;
  if (text == "minus_one") return BoundKind::kMinusOne;
  if (text == "prior_regular") return BoundKind::kPriorRegular;
  throw std::invalid_argument("unknown bound kind: '" + text + "'");
}

double envelope(BoundKind kind, const GrassmannianSpace& space,
                const SphericalWeight& w) {
  if (w.rank() != space.q()) throw std::invalid_argument("weight rank mismatch");
  const int p = space.p();
  const int q = space.q();
  const int r = space.r();
  const auto& n = w.n();
  switch (kind) {
    case BoundKind::kGeneralPqStrict: {
      if (p <= q) throw std::invalid_argument("kind/space mismatch");
      double v = 1.0;
      for (int j = 0; j < q - 1; ++j) v /= static_cast<double>(n[j] + 1);
      return v;
    }
    case BoundKind::kGeneralPqEqual: {
      if (p != q) throw std::invalid_argument("kind/space mismatch");
      double v = 1.0;
      for (int j = 0; j < q - 1; ++j) v /= std::sqrt(static_cast<double>(n[j] + 1));
      return v;
    }
    case BoundKind::kRegular: {
      double v = 1.0;
      for (int j = 0; j < q; ++j)
        v *= std::pow(static_cast<double>(n[j] + 1), -p + (j + 1) - 0.5);
      return v;
    }
    case BoundKind::kFlatInterior: {
      double v = std::pow(static_cast<double>(n[q - 1] + 1), -(p - q));
      for (int j = 0; j < q - 1; ++j)
        v *= std::pow(static_cast<double>(n[j] + r), -(p - q) - 0.5);
      return v;
    }
    case BoundKind::kMinusOne: {
      if (p <= q) throw std::invalid_argument("kind/space mismatch");
      double v = 1.0;
      for (int j = 0; j < q; ++j)
        v *= std::pow(static_cast<double>(n[j] + r), -(p - q));
      return v;
    }
    case BoundKind::kPriorRegular: {
      double v = 1.0;
      for (int j = 0; j < q; ++j)
        v *= std::pow(static_cast<double>(n[j] + 1), -p + q / 2.0);
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

double slope_estimate(std::span<const double> shell_maxima) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long count = 0;
  for (std::size_t i = 0; i < shell_maxima.size(); ++i) {
    if (shell_maxima[i] <= 0.0) continue;
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(shell_maxima[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 8) throw std::invalid_argument("insufficient data");
  const double det = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / det;
}

namespace {

void check_point_class(BoundKind kind, const GrassmannianSpace& space,
                       const TorusPoint& point) {
  switch (kind) {
    case BoundKind::kRegular:
    case BoundKind::kPriorRegular:
      if (!point.is_regular()) throw std::invalid_argument("kind/space mismatch");
      break;
    case BoundKind::kFlatInterior:
      if (point.blocks().size() != 1 || point.all_minus_one() || point.all_plus_one())
        throw std::invalid_argument("kind/space mismatch");
      break;
    case BoundKind::kMinusOne:
      if (!point.all_minus_one()) throw std::invalid_argument("kind/space mismatch");
      break;
    case BoundKind::kGeneralPqStrict:
    case BoundKind::kGeneralPqEqual:
      if (point.in_normalizer()) throw std::invalid_argument("kind/space mismatch");
      break;
  }
  (void)space;
}

}  // namespace

RatioSweepReport ratio_sweep(BoundKind kind, const GrassmannianSpace& space,
                             const TorusPoint& point, long n_max,
                             unsigned threads) {
  check_point_class(kind, space, point);

  RatioSweepReport report;
  report.kind = kind;
  report.p = space.p();
  report.q = space.q();
  report.point = point.to_string();
  report.n_max = n_max;
  report.max_ratio_per_shell.assign(static_cast<std::size_t>(n_max), 0.0);

  const std::vector<SphericalWeight> weights = enumerate_weights(space, n_max);
  SphericalEvaluator ev(space, point);
  ev.prepare(n_max);

  std::vector<double> ratios(weights.size(), 0.0);
  parallel_for_index(weights.size(), threads, [&](std::size_t i) {
    const double value = ev.eval_auto(weights[i]).value;
    ratios[i] = std::abs(value) / envelope(kind, space, weights[i]);
  });

  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long shell = weights[i].n1();
    if (shell >= 1 && shell <= n_max) {
      double& slot = report.max_ratio_per_shell[static_cast<std::size_t>(shell - 1)];
      slot = std::max(slot, ratios[i]);
    }
    report.overall_sup = std::max(report.overall_sup, ratios[i]);
  }
  report.log_log_slope = slope_estimate(report.max_ratio_per_shell);
  return report;
}

}  // namespace grasph
