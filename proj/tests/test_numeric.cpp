#include <doctest.h>

#include <framekit/numeric.hpp>

#include "oracles.hpp"

using namespace framekit;

namespace {

std::vector<NormSpec> spec_zoo(std::size_t n) {
  CoeffVector w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + static_cast<double>(i);
  CoeffMatrix a(n, n);
  Rng rng(77);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
    a(i, i) += 4.0;  // keeps the matrix comfortably invertible
  }
  CoeffVector sw(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) sw[i] = 1.0 + static_cast<double>(i);
  CoeffMatrix cols = CoeffMatrix::identity(n);
  return {NormSpec::lp(1.5),
          NormSpec::l2(),
          NormSpec::lp(3.0),
          NormSpec::weighted_l2(w),
          NormSpec::sup(),
          NormSpec::matrix_induced(a),
          NormSpec::shift_tilde(sw).scaled(1.25),
          NormSpec::synthesis_sup(cols, NormSpec::lp(1.5))};
}

}  // namespace

TEST_CASE("norm: spec examples") {
  CHECK(norm(CoeffVector{1, 0, 0}, NormSpec::l2()) == doctest::Approx(1.0).epsilon(1e-15));
  for (const auto& spec : spec_zoo(3))
    CHECK(norm(CoeffVector{0, 0, 0}, spec) == 0.0);
  CHECK(norm(CoeffVector{1, 1}, NormSpec::lp(1.5)) ==
        doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("norm: homogeneity, definiteness, triangle inequality") {
  const std::size_t n = 7;
  Rng rng(101);
  for (const auto& spec : spec_zoo(n)) {
    for (int k = 0; k < 1000; ++k) {
      CoeffVector a = rng.gaussian(n);
      CoeffVector b = rng.gaussian(n);
      const double t = 3.0 * rng.symmetric();
      const double na = norm(a, spec);
      const double nb = norm(b, spec);
      REQUIRE(na > 0.0);
      CHECK(norm(t * a, spec) == doctest::Approx(std::abs(t) * na).epsilon(1e-12));
      CHECK(norm(a + b, spec) <= (na + nb) * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("norm: validation") {
  CHECK_THROWS_AS(NormSpec::lp(1.0), std::invalid_argument);
  CHECK_THROWS_AS(NormSpec::lp(0.5), std::invalid_argument);
  CHECK_THROWS_AS(NormSpec::weighted_l2(CoeffVector{0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(norm(CoeffVector{1.0, 2.0, 3.0}, NormSpec::weighted_l2(CoeffVector{1, 2})),
                  std::invalid_argument);
  CoeffVector bad{1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(norm(bad, NormSpec::l2()), std::invalid_argument);
  CHECK_THROWS_AS(NormSpec::l2().scaled(-1.0), std::invalid_argument);
}

TEST_CASE("svd: examples") {
  SUBCASE("identity") {
    auto s = svd(CoeffMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i) CHECK(s.sigma[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("diagonal") {
    CoeffMatrix d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 2.0;
    auto s = svd(d);
    CHECK(s.sigma[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(s.sigma[1] == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("shift analysis matrix; gram is diag(2,1,1,1)") {
    CoeffMatrix u(5, 4);
    u(0, 0) = 1;
    u(1, 0) = 1;
    u(2, 1) = 1;
    u(3, 2) = 1;
    u(4, 3) = 1;
    auto s = svd(u);
    CHECK(s.sigma[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    for (std::size_t i = 1; i < 4; ++i) CHECK(s.sigma[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("svd: random matrices reconstruct and match power iteration") {
  Rng rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    CoeffMatrix a(20, 20);
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) a(i, j) = rng.normal();
    auto s = svd(a);
    for (std::size_t i = 0; i + 1 < s.sigma.size(); ++i) CHECK(s.sigma[i] >= s.sigma[i + 1]);

    double err = 0.0;
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) {
        double r = 0.0;
        for (std::size_t k = 0; k < 20; ++k) r += s.u(i, k) * s.sigma[k] * s.v(j, k);
        err = std::max(err, std::abs(r - a(i, j)));
      }
    CHECK(err <= 1e-10 * std::max(1.0, s.sigma[0]));
    CHECK(s.sigma[0] ==
          doctest::Approx(oracles::power_iteration_sigma_max(a)).epsilon(1e-8));
  }
}

TEST_CASE("svd: rejects non-finite input") {
  CoeffMatrix a(2, 2);
  a(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(svd(a), std::invalid_argument);
}

TEST_CASE("pseudo-inverse and rank") {
  CoeffMatrix u(3, 2);
  u(0, 0) = 1;
  u(1, 0) = 1;  // duplicated direction
  u(2, 1) = 1;
  CHECK(rank_of(u) == 2);
  CoeffMatrix up = pseudo_inverse(u);
  CoeffMatrix id = up.mul(u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(id(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));

  CoeffMatrix flat(2, 2);
  flat(0, 0) = 1;
  flat(1, 0) = 1;  // rank one
  CHECK(rank_of(flat) == 1);
}

TEST_CASE("least_norm_solve: spec examples") {
  SUBCASE("single coordinate bound") {
    std::vector<LinearConstraint> cs{{CoeffVector{1, 0, 0}, 1.0, false}};
    auto r = least_norm_solve(cs, NormSpec::l2(), 3);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.minimizer[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.minimizer[1]) <= 1e-12);
  }
  SUBCASE("two orthogonal bounds") {
    std::vector<LinearConstraint> cs{{CoeffVector{1, 0, 0}, 1.0, false},
                                     {CoeffVector{0, 1, 0}, 1.0, false}};
    auto r = least_norm_solve(cs, NormSpec::l2(), 3);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("weighted objective, hand-solved stationarity") {
    std::vector<LinearConstraint> cs{{CoeffVector{1, 1}, 2.0, false}};
    auto r = least_norm_solve(cs, NormSpec::weighted_l2(CoeffVector{1, 2}), 2);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.minimizer[0] == doctest::Approx(8.0 / 5.0).epsilon(1e-10));
    CHECK(r.minimizer[1] == doctest::Approx(2.0 / 5.0).epsilon(1e-10));
    CHECK(r.value == doctest::Approx(std::sqrt(3.2)).epsilon(1e-10));
  }
}

TEST_CASE("least_norm_solve: infeasible vs degenerate input") {
  std::vector<LinearConstraint> conflicting{{CoeffVector{1, 0}, 1.0, false},
                                            {CoeffVector{-1, 0}, 1.0, false}};
  auto r = least_norm_solve(conflicting, NormSpec::l2(), 2);
  CHECK(r.status == SolveStatus::Infeasible);

  CHECK_THROWS_AS(least_norm_solve(conflicting, NormSpec::lp(1.5), 2), std::invalid_argument);
}

TEST_CASE("least_norm_solve: feasibility and local optimality on random problems") {
  Rng rng(31);
  const std::size_t n = 6;
  for (int trial = 0; trial < 40; ++trial) {
    // feasible by construction: offsets cut below a known interior point
    CoeffVector interior = rng.gaussian(n);
    std::vector<LinearConstraint> cs;
    const std::size_t m = 1 + rng.below(5);
    for (std::size_t i = 0; i < m; ++i) {
      LinearConstraint lc;
      lc.normal = rng.gaussian(n);
      lc.offset = dot(lc.normal, interior) - rng.uniform();
      cs.push_back(std::move(lc));
    }
    auto r = least_norm_solve(cs, NormSpec::l2(), n);
    REQUIRE(r.status == SolveStatus::Optimal);
    for (const auto& c : cs) CHECK(dot(c.normal, r.minimizer) >= c.offset - 1e-9);

    for (int p = 0; p < 20; ++p) {
      CoeffVector d = rng.gaussian(n);
      CoeffVector probe = r.minimizer + (1e-3 / l2(d)) * d;
      bool feasible = true;
      for (const auto& c : cs)
        if (dot(c.normal, probe) < c.offset) feasible = false;
      if (feasible) CHECK(l2(probe) >= r.value - 1e-6);
    }
  }
}

TEST_CASE("dual_norm: closed forms") {
  CoeffVector w{1, 2, 4};
  CHECK(dual_norm(CoeffVector{1, 2, 4}, NormSpec::weighted_l2(w)) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  // l^p pairs with l^q
  const double q = 1.5 / 0.5;
  CHECK(dual_norm(CoeffVector{1, 1}, NormSpec::lp(1.5)) ==
        doctest::Approx(std::pow(2.0, 1.0 / q)).epsilon(1e-12));
  CHECK(dual_norm(CoeffVector{1, -2}, NormSpec::sup()) == doctest::Approx(3.0).epsilon(1e-12));
  // scaled norm divides the dual
  CHECK(dual_norm(CoeffVector{1, 0}, NormSpec::l2().scaled(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // induced by an invertible matrix: biggest f with |Af| = 1 paired against v
  CoeffMatrix a(2, 2);
  a(0, 0) = 2;
  a(1, 1) = 1;
  CHECK(dual_norm(CoeffVector{1, 0}, NormSpec::matrix_induced(a)) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rng: deterministic stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}
