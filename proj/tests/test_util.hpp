#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace grasph::testutil {

/// Central difference with one Richardson extrapolation step; error O(h^4).
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double h) {
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2 * step); };
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

/// Second derivative via central differences plus Richardson; error O(h^4).
inline double fd_second_derivative(const std::function<double(double)>& f, double x,
                                   double h) {
  auto central = [&](double step) {
    return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
  };
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

inline double rel_error(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

/// Least-squares slope of log(y) vs log(x) over positive samples.
inline double loglog_slope(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] <= 0) continue;
    const double x = std::log(xs[i]);
    const double y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace grasph::testutil
