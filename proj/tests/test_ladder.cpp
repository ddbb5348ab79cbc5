#include <doctest.h>

#include <framekit/ladder.hpp>
#include <framekit/models.hpp>
#include <framekit/serialize.hpp>

#include "oracles.hpp"

using namespace framekit;

TEST_CASE("ladder axioms: decreasing-exponent sequence ladder is exactly monotone") {
  ThetaLadder lad = lp_theta_ladder(8, 4);
  AxiomReport rep = check_ladder_axioms(lad, 500, 3);
  CHECK(rep.pass);
  CHECK(rep.monotonicity_violation == 0.0);
  CHECK(rep.density_guard_residual == 0.0);
  CHECK(rep.canonical_vectors_ok);
  for (double l : rep.lambda_measured) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ladder axioms: weighted quadratic ladder") {
  std::vector<NormSpec> levels;
  for (std::size_t s = 0; s <= 2; ++s) {
    CoeffVector w(6);
    for (std::size_t i = 0; i < 6; ++i) w[i] = hermite_weight(i + 1, s);
    levels.push_back(NormSpec::weighted_l2(w));
  }
  SpaceLadder lad("weighted", 6, levels);
  AxiomReport rep = check_ladder_axioms(lad, 500, 5);
  CHECK(rep.pass);
  CHECK(rep.monotonicity_violation == 0.0);
}

TEST_CASE("ladder axioms: reversed ladder fails with a positive violation") {
  std::vector<NormSpec> levels{NormSpec::lp(1.2), NormSpec::lp(1.5), NormSpec::l2()};
  SpaceLadder lad("reversed", 8, levels);
  AxiomReport rep = check_ladder_axioms(lad, 200, 7);
  CHECK_FALSE(rep.pass);
  CHECK(rep.monotonicity_violation > 1e-3);
}

TEST_CASE("measure_lambda") {
  SUBCASE("solid norms never inflate under prefixes") {
    ThetaLadder l2lad("l2", 6, {NormSpec::l2(), NormSpec::l2()});
    CHECK(measure_lambda(l2lad, 0, 500, 11) == doctest::Approx(1.0).epsilon(1e-14));
    ThetaLadder suplad("sup", 6, {NormSpec::sup(), NormSpec::sup()});
    CHECK(measure_lambda(suplad, 1, 500, 11) == doctest::Approx(1.0).epsilon(1e-14));
    for (double p : {1.2, 1.5, 2.0, 3.0}) {
      ThetaLadder lplad("lp", 6, {NormSpec::lp(p), NormSpec::lp(p)});
      CHECK(measure_lambda(lplad, 0, 500, 13) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("a shear-induced norm inflates prefixes, bounded by the circle-grid sup") {
    CoeffMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 1;
    a(1, 1) = 1;
    ThetaLadder lad("shear", 2,
                    {NormSpec::matrix_induced(a), NormSpec::matrix_induced(a)});
    const double measured = measure_lambda(lad, 0, 500, 17);
    const double grid = oracles::circle_grid_lambda(a);
    CHECK(measured > 1.05);
    CHECK(measured <= grid + 1e-9);
    CHECK(grid == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  }
}

TEST_CASE("ladder: canonical vectors have finite positive norms on shipped levels") {
  auto shift = build_weighted_shift_model(6, 2);
  for (std::size_t s = 0; s < shift.theta_ladder.level_count(); ++s)
    for (std::size_t i = 0; i < shift.theta_ladder.truncation(); ++i) {
      const double v = shift.theta_ladder.norm_at(
          CoeffVector::unit(shift.theta_ladder.truncation(), i), s);
      CHECK(v > 0.0);
      CHECK(std::isfinite(v));
    }
}

TEST_CASE("ladder: validation") {
  CHECK_THROWS_AS(SpaceLadder("one-level", 4, {NormSpec::l2()}), std::invalid_argument);
  CHECK_THROWS_AS(SpaceLadder("dim", 4, {NormSpec::weighted_l2(CoeffVector{1, 2}), NormSpec::l2()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ThetaLadder("bk", 4, {NormSpec::l2(), NormSpec::l2()}, std::vector<double>{0.5, 1.0}),
      std::invalid_argument);
  ThetaLadder ok("ok", 4, {NormSpec::l2(), NormSpec::l2()});
  CHECK_THROWS_AS(check_ladder_axioms(ok, 0, 1), std::invalid_argument);
}

TEST_CASE("ladder: json round trip preserves every level norm") {
  auto shift = build_weighted_shift_model(5, 2);
  json doc = to_json(shift.theta_ladder);
  ThetaLadder back = theta_ladder_from_json(doc);
  Rng rng(19);
  for (int k = 0; k < 200; ++k) {
    CoeffVector v = rng.gaussian(back.truncation());
    for (std::size_t s = 0; s < back.level_count(); ++s)
      CHECK(back.norm_at(v, s) == shift.theta_ladder.norm_at(v, s));
  }
  json doc2 = to_json(build_lp_shift_model({1.0, 0.5}, 6, 2).x_ladder);
  SpaceLadder back2 = space_ladder_from_json(doc2);
  for (int k = 0; k < 50; ++k) {
    CoeffVector v = rng.gaussian(6);
    for (std::size_t s = 0; s < back2.level_count(); ++s)
      CHECK(back2.norm_at(v, s) ==
            doctest::Approx(build_lp_shift_model({1.0, 0.5}, 6, 2).x_ladder.norm_at(v, s))
                .epsilon(1e-15));
  }
}
