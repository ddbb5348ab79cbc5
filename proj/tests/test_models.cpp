#include <doctest.h>

#include <framekit/models.hpp>

#include "oracles.hpp"

using namespace framekit;

namespace {

// level-s inner product of the weighted quadratic ladder
double weighted_inner(const CoeffVector& a, const CoeffVector& b, const CoeffVector& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * w[i] * a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("hermite model: eigenvalue weights") {
  CHECK(hermite_weight(1, 3) == 1.0);
  CHECK(hermite_weight(3, 2) == 25.0);
  auto m = build_hermite_model(6, 3);
  for (std::size_t s = 0; s <= 3; ++s)
    CHECK(m.x_ladder.norm_at(CoeffVector::unit(6, 1), s) ==
          doctest::Approx(std::pow(3.0, static_cast<double>(s))).epsilon(1e-12));
}

TEST_CASE("hermite model: biorthogonal expansion is exact at every level") {
  auto m = build_hermite_model(8, 3);
  REQUIRE(m.dual.has_value());
  auto rep = cb_test_via_biorthogonal(m.frame, m.dual->vectors, m.x_ladder);
  CHECK(rep.pass);
  auto exp = verify_expansions(m.frame, *m.dual);
  CHECK(exp.pass);
  for (const auto& lev : exp.levels) CHECK(lev.residual_primal <= 1e-12);
}

TEST_CASE("weighted shift model: analysis of the first basis vector") {
  auto m = build_weighted_shift_model(6, 2);
  CoeffVector out = analyze(m.frame, CoeffVector::unit(6, 0));
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 1.0);
  for (std::size_t i = 2; i < 7; ++i) CHECK(out[i] == 0.0);
}

TEST_CASE("weighted shift model: rescaled basis vectors have unit level norms") {
  auto m = build_weighted_shift_model(6, 3);
  for (std::size_t s = 0; s <= 3; ++s)
    for (std::size_t i = 0; i < 6; ++i) {
      CoeffVector z = (1.0 / hermite_weight(i + 1, s)) * CoeffVector::unit(6, i);
      CHECK(m.x_ladder.norm_at(z, s) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("weighted shift model: weighted pairing identity against base coordinates") {
  auto m = build_weighted_shift_model(6, 2);
  Rng rng(81);
  for (std::size_t s = 0; s <= 2; ++s) {
    CoeffVector w(6);
    for (std::size_t i = 0; i < 6; ++i) w[i] = hermite_weight(i + 1, s);
    for (int k = 0; k < 50; ++k) {
      CoeffVector f = rng.gaussian(6);
      for (std::size_t i = 0; i < 6; ++i) {
        CoeffVector z = (1.0 / w[i]) * CoeffVector::unit(6, i);
        CHECK(weighted_inner(f, z, w) == doctest::Approx(w[i] * f[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("weighted shift model: solid ladder equals the optimizer") {
  auto m = build_weighted_shift_model(6, 2);
  Rng rng(83);
  for (int k = 0; k < 15; ++k) {
    CoeffVector c = analyze(m.frame, rng.gaussian(6));
    for (std::size_t s = 0; s <= 2; ++s) {
      auto t = tilde_norm(m.frame, {c, s});
      REQUIRE(t.status == TildeStatus::Optimal);
      CHECK(t.value == doctest::Approx(m.theta_ladder.norm_at(c, s)).epsilon(1e-10));
    }
  }
}

TEST_CASE("weighted shift model: tight bounds and passing conditions") {
  auto m = build_weighted_shift_model(6, 2);
  auto bounds = estimate_frame_bounds(m.frame);
  for (const auto& e : bounds.levels) {
    CHECK(e.lower == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.upper == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (std::size_t s = 0; s <= 2; ++s) {
    CHECK(check_A1(m.frame, s, 100, 3).verdict == "pass");
    CHECK(check_A3(m.frame, s, 20, 5).estimate == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(check_A2(m.frame, 0, 3, 7).verdict == "pass");
}

TEST_CASE("weighted shift model: closed-form certificate inequality on many pairs") {
  auto m = build_weighted_shift_model(6, 2);
  Rng rng(87);
  for (std::size_t s = 0; s <= 2; ++s) {
    const NormSpec& xs = m.x_ladder.level(s);
    for (int k = 0; k < 1000; ++k) {
      CoeffVector f = rng.gaussian(6);
      CoeffVector h = rng.gaussian(6);
      CoeffVector cd = analyze(m.frame, f) + analyze(m.frame, h);
      CoeffVector r(6);
      r[0] = std::max(std::abs(cd[0]), std::abs(cd[1]));
      for (std::size_t j = 1; j < 6; ++j) r[j] = std::abs(cd[j + 1]);
      CHECK(norm(r, xs) <= norm(f, xs) + norm(h, xs) + 1e-9);
    }
  }
}

TEST_CASE("weighted shift model: invalid weights are rejected") {
  std::vector<std::vector<double>> bad{{1, 1, 1}, {0.5, 1, 1}};
  CHECK_THROWS_AS(build_weighted_shift_model(bad, 3, 1), std::invalid_argument);
  std::vector<std::vector<double>> decreasing{{2, 2, 2}, {1, 1, 1}};
  CHECK_THROWS_AS(build_weighted_shift_model(decreasing, 3, 1), std::invalid_argument);
}

TEST_CASE("lp model: exponent sequence") {
  auto p = lp_exponents(3);
  CHECK(p[0] == doctest::Approx(2.0));
  CHECK(p[1] == doctest::Approx(1.5));
  CHECK(p[2] == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("lp model: the Kronecker generator reduces to the coordinate frame") {
  auto m = build_lp_shift_model({1.0}, 6, 2);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(m.frame.functionals()(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
      CHECK(m.dual->vectors(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  auto bounds = estimate_frame_bounds(m.frame);
  for (const auto& e : bounds.levels) {
    CHECK(e.lower == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.upper == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("lp model: two-tap dual generator matches the pseudo-inverse") {
  auto m = build_lp_shift_model({1.0, 0.5}, 8, 2);
  CoeffMatrix expect = pseudo_inverse(m.frame.functionals());
  double gap = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      gap = std::max(gap, std::abs(expect(i, j) - m.dual->vectors(i, j)));
  CHECK(gap <= 1e-12);

  auto exp = verify_expansions(m.frame, *m.dual);
  CHECK(exp.pass);
  for (const auto& lev : exp.levels) CHECK(lev.residual_primal <= 1e-10);
}

TEST_CASE("lp model: sequence ladder monotonicity is exact") {
  auto m = build_lp_shift_model({1.0, 0.5}, 8, 2);
  auto rep = check_ladder_axioms(m.theta_ladder, 500, 91);
  CHECK(rep.pass);
  CHECK(rep.monotonicity_violation == 0.0);
}

TEST_CASE("lp model: a vanishing symbol refuses to build") {
  CHECK_THROWS_AS(build_lp_shift_model({1.0, -1.0}, 8, 2), std::invalid_argument);
}

TEST_CASE("coordinate model") {
  auto m = build_coordinate_model(8, 3);
  SUBCASE("base-level bounds are one") {
    auto e = estimate_frame_bounds(m.frame, 0);
    CHECK(e.lower == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e.upper == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("constructed space norms coincide with the sequence norms") {
    Rng rng(93);
    for (int k = 0; k < 500; ++k) {
      CoeffVector v = rng.gaussian(8);
      for (std::size_t s = 0; s < 4; ++s)
        CHECK(m.x_ladder.norm_at(v, s) ==
              doctest::Approx(m.theta_ladder.norm_at(v, s)).epsilon(1e-12));
    }
  }
  SUBCASE("analysis operator covers the whole coefficient space") {
    CHECK(rank_of(m.frame.functionals()) == 8);
  }
}

TEST_CASE("model dispatcher") {
  ModelSpec spec;
  spec.name = "hermite";
  spec.truncation = 4;
  spec.level_count = 3;
  CHECK(build_model(spec).frame.truncation() == 4);
  spec.name = "nonsense";
  CHECK_THROWS_AS(build_model(spec), std::invalid_argument);
}
