#include <doctest.h>

#include <cmath>

#include "grasph/series.hpp"

using namespace grasph;

namespace {

const GrassmannianSpace s32(3, 2);
const GrassmannianSpace s22(2, 2);

}  // namespace

TEST_CASE("published thresholds, pure arithmetic") {
  const ThresholdRecord t32 = thresholds(s32, Rational(0));
  CHECK(t32.k_main == 6);     // k > max(3, 5)
  CHECK(t32.k_regular == 2);
  CHECK(t32.k_prior == 3);    // k > 11/4

  const ThresholdRecord t22 = thresholds(s22, Rational(0));
  CHECK(t22.k_main == 7);     // k > max(4, 6)
  CHECK(t22.k_regular == 3);

  const ThresholdRecord t32s1 = thresholds(s32, Rational(1));
  CHECK(t32s1.k_sobolev == 2);  // k > 4/2.5
  CHECK(t32s1.k_main == 6);     // k > max(1+3, 5)

  const ThresholdRecord t42 = thresholds(GrassmannianSpace(4, 2), Rational(0));
  CHECK(t42.k_main == 8);  // k > max(4, 7)

  CHECK_THROWS_AS(thresholds(s32, Rational(-1)), std::invalid_argument);
}

TEST_CASE("series verdicts match the convergence theory at desk scale") {
  TorusPoint reg = parse_point(s32, "1/5,1/7");
  CHECK(series_sweep(s32, reg, 1, Rational(0), 60).verdict == Verdict::kDiverging);
  CHECK(series_sweep(s32, reg, 2, Rational(0), 60).verdict == Verdict::kConverging);

  TorusPoint reg22 = parse_point(s22, "1/5,1/7");
  CHECK(series_sweep(s22, reg22, 3, Rational(0), 60).verdict == Verdict::kConverging);

  TorusPoint flat = parse_point(s32, "1/6,1/6");
  CHECK(series_sweep(s32, flat, 6, Rational(0), 60).verdict == Verdict::kConverging);
}

TEST_CASE("partial sums never decrease and shells respond monotonically to k and s") {
  TorusPoint reg = parse_point(s32, "1/5,1/7");
  const SeriesReport r2 = series_sweep(s32, reg, 2, Rational(0), 30);
  const SeriesReport r3 = series_sweep(s32, reg, 3, Rational(0), 30);
  const SeriesReport r2s = series_sweep(s32, reg, 2, Rational(1), 30);

  for (std::size_t i = 1; i < r2.partial_sums.size(); ++i)
    CHECK(r2.partial_sums[i] >= r2.partial_sums[i - 1]);

  REQUIRE(r2.shell_sums.size() == r3.shell_sums.size());
  // termwise monotone up to an ulp: float phi_0 can land at 1 +- eps
  for (std::size_t i = 0; i < r2.shell_sums.size(); ++i) {
    CHECK(r3.shell_sums[i] <= r2.shell_sums[i] * (1 + 1e-12));   // |phi| <= 1
    CHECK(r2s.shell_sums[i] >= r2.shell_sums[i] * (1 - 1e-12));  // 1 + kappa >= 1
  }
}

TEST_CASE("normalizer points are refused with a diverging verdict") {
  TorusPoint norm = parse_point(s22, "1/2,1/2");
  const SeriesReport rep = series_sweep(s22, norm, 4, Rational(0), 30);
  CHECK(rep.normalizer_refused);
  CHECK(rep.verdict == Verdict::kDiverging);
  CHECK(rep.shells.empty());

  CHECK(k_min_search(s22, norm, Rational(0), 8, 30) == std::nullopt);
}

TEST_CASE("k-min search") {
  TorusPoint reg = parse_point(s32, "1/5,1/7");
  CHECK(k_min_search(s32, reg, Rational(0), 6, 60) == 2);

  // the flat point converges already at k = 2 (the theorem guarantees 6)
  TorusPoint flat = parse_point(s32, "1/6,1/6");
  auto kmin = k_min_search(s32, flat, Rational(0), 8, 60);
  REQUIRE(kmin.has_value());
  CHECK(*kmin <= 6);
  CHECK(*kmin == 2);

  CHECK_THROWS_AS(k_min_search(s32, reg, Rational(0), 0, 30), std::invalid_argument);
}

TEST_CASE("shell sums are bitwise reproducible across thread counts") {
  TorusPoint reg = parse_point(s32, "1/5,1/7");
  const SeriesReport a = series_sweep(s32, reg, 2, Rational(0), 40, 1);
  const SeriesReport b = series_sweep(s32, reg, 2, Rational(0), 40, 4);
  CHECK(a.shell_sums == b.shell_sums);
  CHECK(a.partial_sums == b.partial_sums);
  CHECK(a.tail_exponent == b.tail_exponent);
}

TEST_CASE("input validation") {
  TorusPoint reg = parse_point(s32, "1/5,1/7");
  CHECK_THROWS_AS(series_sweep(s32, reg, 0, Rational(0), 30), std::invalid_argument);
  CHECK_THROWS_AS(series_sweep(s32, reg, 2, Rational(-1), 30), std::invalid_argument);
}
