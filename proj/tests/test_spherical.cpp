#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "grasph/spherical.hpp"
#include "test_util.hpp"

using namespace grasph;
using grasph::testutil::rel_error;

namespace {

const GrassmannianSpace s22(2, 2);
const GrassmannianSpace s32(3, 2);
const GrassmannianSpace s33(3, 3);

EvalRequest request(const GrassmannianSpace& s, std::vector<long> m,
                    const TorusPoint& pt, EvalMode mode = EvalMode::kAuto) {
  return EvalRequest{&s, SphericalWeight::from_m(std::move(m)), pt, mode};
}

}  // namespace

TEST_CASE("leading constant") {
  CHECK(c_pq(s22) == 2);
  CHECK(c_pq(s32) == 4);
  CHECK(c_pq(s33) == 32);
}

TEST_CASE("the trivial weight gives 1 at every point and along every path") {
  const std::vector<long> zero{0, 0};
  TorusPoint reg = parse_point(s32, "1/5,1/7");
  CHECK(evaluate(request(s32, zero, reg, EvalMode::kGeneric)).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evaluate(request(s32, zero, reg, EvalMode::kConfluent)).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  TorusPoint flat = parse_point(s32, "1/6,1/6");
  CHECK(evaluate(request(s32, zero, flat, EvalMode::kConfluent)).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  TorusPoint minus = parse_point(s32, "1/2,1/2");
  CHECK(eval_minus_one_closed_form(request(s32, zero, minus)).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle_exact(request(s32, zero, minus)) == 1);

  TorusPoint idp = parse_point(s32, "0,0");
  CHECK(evaluate(request(s32, zero, idp)).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form reduction for (2,2), m=(1,0): phi = (cos 2t1 + cos 2t2)/2") {
  TorusPoint pt = parse_point(s22, "1/4,0");
  const EvalResult res = evaluate(request(s22, {1, 0}, pt, EvalMode::kGeneric));
  CHECK(res.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.path_taken == EvalPath::kGeneric);
  CHECK(oracle_exact(request(s22, {1, 0}, pt)) == make_rational(1, 2));

  // the same weight at a confluent point: the limit value cos(pi/3) = 1/2
  TorusPoint conf = parse_point(s22, "1/6,1/6");
  CHECK(evaluate(request(s22, {1, 0}, conf, EvalMode::kConfluent)).value ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(oracle_exact(request(s22, {1, 0}, conf)) == make_rational(1, 2));
}

TEST_CASE("exact oracle on node overrides") {
  TorusPoint nodes =
      point_from_exact_nodes(s22, {make_rational(1, 2), make_rational(-1, 3)});
  CHECK(oracle_exact(request(s22, {1, 0}, nodes)) == make_rational(1, 12));

  TorusPoint rep = point_from_exact_nodes(s22, {make_rational(1, 2), make_rational(1, 2)});
  CHECK(oracle_exact(request(s22, {1, 0}, rep)) == make_rational(1, 2));

  for (const GrassmannianSpace* s : {&s22, &s32}) {
    TorusPoint idp =
        point_from_exact_nodes(*s, std::vector<Rational>(s->q(), Rational(1)));
    SphericalEvaluator ev(*s, idp);
    ev.prepare_exact(8);
    for (const auto& w : enumerate_weights(*s, 8)) CHECK(ev.oracle_exact(w) == 1);
  }
}

TEST_CASE("floating paths agree with the exact oracle at rational nodes") {
  TorusPoint nodes = point_from_exact_nodes(
      s32, {make_rational(3, 4), make_rational(-1, 5)});
  SphericalEvaluator ev(s32, nodes);
  ev.prepare(12);
  ev.prepare_exact(12);
  for (const auto& w : enumerate_weights(s32, 12)) {
    const double num = ev.eval_generic(w).value;
    const double exact = to_double(ev.oracle_exact(w));
    CHECK(rel_error(num, exact) <= 1e-9);
  }
}

TEST_CASE("confluent value is the limit of the generic path") {
  // errors fall by roughly a decade per decade of node perturbation
  const std::vector<double> base{0.4, 0.4};
  TorusPoint conf = point_from_float_nodes(s32, base);
  SphericalEvaluator ev(s32, conf);
  ev.prepare(6);
  const SphericalWeight w = SphericalWeight::from_m({3, 1});
  const double limit = ev.eval_confluent(w).value;
  double prev = 0;
  for (int step = 0; step < 3; ++step) {
    const double eps = std::pow(10.0, -2 - step);
    SphericalEvaluator evp(s32, point_from_float_nodes(s32, {base[0] + eps, base[1]}));
    evp.prepare(6);
    const double err = std::abs(evp.eval_generic(w).value - limit);
    if (step > 0) {
      const double factor = prev / err;
      CHECK(factor >= 5.0);
      CHECK(factor <= 20.0);
    }
    prev = err;
  }

  // Richardson extrapolation of the angle-perturbed generic path reproduces
  // the confluent value at (pi/5, pi/5)
  TorusPoint angle_conf = parse_point(s32, "1/5,1/5");
  SphericalEvaluator evc(s32, angle_conf);
  evc.prepare(6);
  const double conf_value = evc.eval_confluent(w).value;
  auto perturbed = [&](double eps) {
    std::vector<TorusEntry> entries = {TorusEntry::float_radians(M_PI / 5 + eps),
                                       TorusEntry::float_radians(M_PI / 5)};
    SphericalEvaluator evp(s32, classify_point(s32, std::move(entries)));
    evp.prepare(6);
    return evp.eval_generic(w).value;
  };
  const double f1 = perturbed(1e-3);
  const double f2 = perturbed(1e-4);
  const double extrapolated = (10.0 * f2 - f1) / 9.0;
  CHECK(rel_error(extrapolated, conf_value) <= 1e-5);
}

TEST_CASE("identity normalization via the confluent path") {
  for (const GrassmannianSpace* s : {&s22, &s32, &s33}) {
    TorusPoint idp = parse_point(*s, std::string("0") + (s->q() == 3 ? ",0,0" : ",0"));
    SphericalEvaluator ev(*s, idp);
    ev.prepare(12);
    for (const auto& w : enumerate_weights(*s, 12))
      CHECK(std::abs(ev.eval_confluent(w).value - 1.0) <= 1e-8);
  }
}

TEST_CASE("all-(-1) closed form") {
  TorusPoint minus = parse_point(s32, "1/2,1/2");
  SphericalEvaluator ev(s32, minus);
  ev.prepare(40);
  ev.prepare_exact(12);

  CHECK(ev.eval_minus_one(SphericalWeight::from_m({0, 0})).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  // cross-path equivalence, closed form vs confluent limit and exact oracle
  for (const auto& w : enumerate_weights(s32, 12)) {
    const double closed = ev.eval_minus_one(w).value;
    CHECK(std::abs(closed - ev.eval_confluent(w).value) <= 1e-10);
    CHECK(rel_error(closed, to_double(ev.oracle_exact(w))) <= 1e-10);
  }

  // decay shape: |phi| * prod (n_j+1)^{p-q} bounded over n_1 <= 40
  double sup = 0;
  for (const auto& w : enumerate_weights(s32, 40)) {
    double scale = 1;
    for (long nj : w.n()) scale *= std::pow(nj + 1.0, s32.gap());
    sup = std::max(sup, std::abs(ev.eval_minus_one(w).value) * scale);
  }
  CHECK(sup <= 4.0);  // kappa(3,2) = -2, so the scaled product tops out near 2
}

TEST_CASE("auto dispatch picks the right path") {
  CHECK(evaluate(request(s32, {2, 1}, parse_point(s32, "1/5,1/7"))).path_taken ==
        EvalPath::kGeneric);
  const EvalResult at_id = evaluate(request(s32, {2, 1}, parse_point(s32, "0,0")));
  CHECK(at_id.path_taken == EvalPath::kConfluent);
  CHECK(at_id.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(evaluate(request(s32, {2, 1}, parse_point(s32, "1/2,1/2"))).path_taken ==
        EvalPath::kMinusOneClosedForm);
  // p = q at the all-(-1) point: normalizer, but phi is still defined
  const EvalResult at_norm = evaluate(request(s22, {2, 1}, parse_point(s22, "1/2,1/2")));
  CHECK(at_norm.path_taken == EvalPath::kConfluent);
  CHECK(std::abs(at_norm.value) == doctest::Approx(1.0).epsilon(1e-10));

  TorusPoint mixed = parse_point(s33, "1/5,1/5,1/7");
  const EvalResult res = evaluate(request(s33, {2, 1, 0}, mixed));
  CHECK(res.path_taken == EvalPath::kConfluent);
  CHECK(std::isinf(res.condition_estimate));
}

TEST_CASE("near-confluent floating nodes fall back to the collapsed limit") {
  TorusPoint nc = point_from_float_nodes(s32, {0.3, 0.3 + 1e-8});
  SphericalEvaluator ev(s32, nc);
  ev.prepare(6);
  const SphericalWeight w = SphericalWeight::from_m({2, 1});
  const EvalResult res = ev.eval_auto(w);
  CHECK(res.path_taken == EvalPath::kConfluent);
  REQUIRE(res.warnings.size() >= 1);
  CHECK(res.warnings.back().find("near-confluent") != std::string::npos);
  CHECK(res.condition_estimate == doctest::Approx(1e8).epsilon(0.2));

  // the collapsed value is within O(gap) of the confluent value at 0.3
  SphericalEvaluator exact_conf(s32, point_from_float_nodes(s32, {0.3, 0.3}));
  exact_conf.prepare(6);
  CHECK(std::abs(res.value - exact_conf.eval_confluent(w).value) <= 1e-7);
}

TEST_CASE("error paths") {
  TorusPoint conf = parse_point(s32, "1/6,1/6");
  CHECK_THROWS_WITH_AS(evaluate(request(s32, {1, 0}, conf, EvalMode::kGeneric)),
                       "confluent point", std::invalid_argument);
  TorusPoint minus22 = parse_point(s22, "1/2,1/2");
  CHECK_THROWS_WITH_AS(eval_minus_one_closed_form(request(s22, {1, 0}, minus22)),
                       "normalizer point", std::invalid_argument);
  TorusPoint irr = parse_point(s32, "1/5,1/7");
  CHECK_THROWS_WITH_AS(oracle_exact(request(s32, {1, 0}, irr)), "irrational node",
                       std::domain_error);
}

TEST_CASE("Weyl symmetry: permutations, sign flips, pi shifts") {
  const SphericalWeight w = SphericalWeight::from_m({3, 1});
  const double base =
      evaluate(request(s32, {3, 1}, parse_point(s32, "1/5,1/7"))).value;
  for (const char* variant : {"1/7,1/5", "-1/5,1/7", "6/5,1/7", "1/5,-6/7"}) {
    const double v = evaluate(request(s32, {3, 1}, parse_point(s32, variant))).value;
    CHECK(rel_error(v, base) <= 1e-12);
  }
  // exact route: exactly invariant
  TorusPoint n1 = point_from_exact_nodes(s32, {make_rational(1, 2), make_rational(-1, 3)});
  TorusPoint n2 = point_from_exact_nodes(s32, {make_rational(-1, 3), make_rational(1, 2)});
  EvalRequest r1{&s32, w, n1, EvalMode::kOracle};
  EvalRequest r2{&s32, w, n2, EvalMode::kOracle};
  CHECK(oracle_exact(r1) == oracle_exact(r2));
}

TEST_CASE("boundedness on a random sample of points") {
  std::mt19937 rng(321u);
  std::uniform_real_distribution<double> uni(0.0, M_PI);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TorusEntry> entries;
    for (int i = 0; i < 2; ++i) entries.push_back(TorusEntry::float_radians(uni(rng)));
    SphericalEvaluator ev(s32, classify_point(s32, std::move(entries)));
    ev.prepare(10);
    for (const auto& w : enumerate_weights(s32, 10))
      worst = std::max(worst, std::abs(ev.eval_auto(w).value));
  }
  CHECK(worst <= 1.0 + 1e-8);
}

TEST_CASE("calibration records") {
  // q = 2: the published constant -1/(q-1)! = -1 is reproduced exactly
  const CalibrationRecord& r22 = calibration_for(s22);
  CHECK(r22.consistent);
  CHECK(r22.global_constant == 1);
  CHECK(r22.eq3_constant == -1);
  CHECK(r22.matches_paper_constant);
  CHECK(r22.matches_classical_constant);
  CHECK(r22.eq3_requires_cpq);

  // q = 3: both candidate constants agree at magnitude 1/2
  const CalibrationRecord& r33 = calibration_for(s33);
  CHECK(abs(r33.eq3_constant) == make_rational(1, 2));
  CHECK(r33.matches_paper_constant);
  CHECK(r33.matches_classical_constant);

  // q = 4: the candidates disagree (6 vs 12); the identity anchor picks the
  // classical superfactorial
  const CalibrationRecord& r44 = calibration_for(GrassmannianSpace(4, 4));
  CHECK(abs(r44.eq3_constant) == make_rational(1, 12));
  CHECK_FALSE(r44.matches_paper_constant);
  CHECK(r44.matches_classical_constant);

  // explicit sample-based run matches the cached record
  auto samples = enumerate_weights(s32, 4);
  CalibrationRecord rec = calibrate_constants(s32, samples);
  CHECK(rec.global_constant == calibration_for(s32).global_constant);
  CHECK(rec.minus_one_kappa == Rational(-2));
  CHECK(rec.sample_count == static_cast<int>(samples.size()));

  CHECK_THROWS_AS(calibrate_constants(s32, std::span<const SphericalWeight>{}),
                  std::invalid_argument);
}

TEST_CASE("condition estimates") {
  TorusPoint reg = parse_point(s32, "1/5,1/7");
  const EvalResult gen = evaluate(request(s32, {1, 0}, reg, EvalMode::kGeneric));
  const double gap = std::abs(std::cos(2 * M_PI / 5) - std::cos(2 * M_PI / 7));
  CHECK(gen.condition_estimate == doctest::Approx(1.0 / gap));
  const EvalResult conf = evaluate(request(s32, {1, 0}, reg, EvalMode::kConfluent));
  CHECK(std::isinf(conf.condition_estimate));
}
