#pragma once

// The three space constructions and their condition checkers:
//   * an induced space ladder from a given sequence ladder (tight at s >= 1),
//   * an induced sequence ladder from a given space ladder (tight everywhere),
//   * the constrained-infimum solid norm |c|~ = inf{ |f|_s : |c_i| <= |g_i(f)| }
//     with its feasibility conditions A1 / A2 / A3.
//
// The feasible set of the infimum is a union of convex sign branches; branches
// are enumerated exhaustively up to a limit and by best-first branch-and-bound
// beyond it, with explicit status labeling.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "framekit/frames.hpp"
#include "framekit/ladder.hpp"
#include "framekit/numeric.hpp"

namespace framekit {

// ---------------------------------------------------------------------------
// Constrained-infimum norm.

struct ConstraintSet {
  CoeffVector c;          // one bound per functional; zeros are vacuous
  std::size_t level = 0;  // level of the minimized space norm
};

struct TildeOptions {
  std::size_t exhaustive_limit = 20;
  std::size_t node_cap = 1000000;
};

enum class TildeStatus { Optimal, BestFound, Infeasible };

struct TildeNormResult {
  double value = std::numeric_limits<double>::infinity();
  CoeffVector minimizer;
  std::vector<std::size_t> support;  // indices with |c_i| > 0, ascending
  std::vector<int> sign_pattern;     // chosen sign per support index
  std::size_t branches_explored = 0;
  TildeStatus status = TildeStatus::Infeasible;
};

namespace detail {

inline LeastNormResult solve_sign_branch(const CoeffMatrix& rows, const NormSpec& objective,
                                         const std::vector<std::size_t>& support,
                                         const std::vector<double>& magnitudes,
                                         const std::vector<int>& signs, std::size_t depth) {
  std::vector<LinearConstraint> cons;
  cons.reserve(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    LinearConstraint lc;
    lc.normal = static_cast<double>(signs[k]) * rows.row(support[k]);
    lc.offset = magnitudes[k];
    cons.push_back(std::move(lc));
  }
  return least_norm_solve(cons, objective, rows.cols());
}

}  // namespace detail

inline TildeNormResult tilde_norm(const FrameSystem& frame, const ConstraintSet& cs,
                                  const TildeOptions& opt = {}) {
  const CoeffMatrix& rows = frame.functionals();
  if (cs.c.size() != frame.functional_count())
    throw std::invalid_argument("tilde_norm: constraint dimension mismatch");
  if (!cs.c.all_finite()) throw std::invalid_argument("tilde_norm: non-finite constraints");
  const NormSpec& objective = frame.x_ladder().level(cs.level);
  if (!l2_factor(objective, frame.truncation()))
    throw std::invalid_argument("tilde_norm: level norm must be quadratic");

  TildeNormResult res;
  for (std::size_t i = 0; i < cs.c.size(); ++i)
    if (std::abs(cs.c[i]) > 0.0) res.support.push_back(i);
  std::vector<double> mags;
  for (std::size_t i : res.support) mags.push_back(std::abs(cs.c[i]));

  if (res.support.empty()) {
    res.value = 0.0;
    res.minimizer = CoeffVector(frame.truncation());
    res.status = TildeStatus::Optimal;
    return res;
  }

  const std::size_t k = res.support.size();
  std::size_t nonconverged = 0;
  auto accept = [&](const LeastNormResult& sol, const std::vector<int>& signs) {
    ++res.branches_explored;
    if (sol.status == SolveStatus::NoConvergence) ++nonconverged;
    if (sol.status != SolveStatus::Optimal) return;
    if (sol.value < res.value) {
      res.value = sol.value;
      res.minimizer = sol.minimizer;
      res.sign_pattern = signs;
      res.status = TildeStatus::Optimal;
    }
  };

  if (k <= opt.exhaustive_limit) {
    // branches sigma and -sigma mirror each other (f <-> -f), so the first
    // sign stays +1; ties resolve to the lexicographically smallest pattern
    // in +1-first order either way.
    std::vector<int> signs(k, 1);
    const std::uint64_t total = std::uint64_t{1} << (k - 1);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      signs[0] = 1;
      for (std::size_t b = 1; b < k; ++b) signs[b] = (mask >> (b - 1)) & 1 ? -1 : 1;
      accept(detail::solve_sign_branch(rows, objective, res.support, mags, signs, k), signs);
    }
    if (res.status != TildeStatus::Optimal) {
      if (nonconverged > 0)
        throw std::runtime_error("tilde_norm: branch solver failed to converge");
      res.status = TildeStatus::Infeasible;
    }
    return res;
  }

  // branch-and-bound: fix signs one constraint at a time, ordered by
  // decreasing magnitude; a node relaxes the unfixed constraints, so its
  // value lower-bounds every completion.
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mags[a] > mags[b]; });
  std::vector<std::size_t> sup_ord(k);
  std::vector<double> mag_ord(k);
  for (std::size_t i = 0; i < k; ++i) {
    sup_ord[i] = res.support[order[i]];
    mag_ord[i] = mags[order[i]];
  }

  std::size_t nodes = 0;
  bool complete = true;
  std::vector<int> signs(k, 1);
  std::vector<int> best_signs;

  auto dfs = [&](auto&& self, std::size_t depth) -> void {
    if (nodes >= opt.node_cap) {
      complete = false;
      return;
    }
    ++nodes;
    LeastNormResult sol =
        detail::solve_sign_branch(rows, objective, sup_ord, mag_ord, signs, depth);
    ++res.branches_explored;
    if (sol.status == SolveStatus::Infeasible) return;  // children stay infeasible
    if (sol.status == SolveStatus::Optimal && sol.value >= res.value - 1e-12 && depth > 0)
      return;  // cannot beat the incumbent
    if (depth == k) {
      if (sol.status == SolveStatus::Optimal && sol.value < res.value) {
        res.value = sol.value;
        res.minimizer = sol.minimizer;
        best_signs = signs;
        res.status = TildeStatus::Optimal;
      }
      return;
    }
    signs[depth] = 1;
    self(self, depth + 1);
    if (depth > 0) {  // mirror symmetry fixes the first sign
      signs[depth] = -1;
      self(self, depth + 1);
      signs[depth] = 1;
    }
  };
  dfs(dfs, 0);

  if (res.status == TildeStatus::Optimal) {
    // map signs back to ascending support order
    res.sign_pattern.assign(k, 1);
    for (std::size_t i = 0; i < k; ++i) res.sign_pattern[order[i]] = best_signs[i];
    if (!complete) res.status = TildeStatus::BestFound;
  } else {
    res.status = complete ? TildeStatus::Infeasible : TildeStatus::BestFound;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Normalization helper for the solid-norm theorems: scales the rows so the
// upper coefficient bound and every row dual norm are at most one. Lossless;
// the factor is recorded wherever it is applied.

struct NormalizedFrame {
  FrameSystem frame;
  double row_scale = 1.0;
};

inline NormalizedFrame normalize_rows(const FrameSystem& frame, const NormSpec& theta_base,
                                      const SampledOptOptions& opt = {}) {
  OperatorExtremes ex =
      operator_extremes(frame.functionals(), frame.x_ladder().level(0), theta_base, opt);
  double t = ex.hi > 1.0 ? 1.0 / ex.hi : 1.0;
  for (std::size_t i = 0; i < frame.functional_count(); ++i) {
    const double row_norm = dual_norm(frame.functionals().row(i), frame.x_ladder().level(0));
    if (row_norm * t > 1.0) t = 1.0 / row_norm;
  }
  if (t >= 1.0) return {frame, 1.0};
  return {frame.with_scaled_rows(t), t};
}

// ---------------------------------------------------------------------------
// Condition checkers A1 / A2 / A3.

struct ConditionWitness {
  CoeffVector c, d, f, h, r;
  std::string note;
};

struct ConditionReport {
  std::string condition;
  std::size_t level = 0;
  std::string verdict;  // "pass" | "sampled-pass" | "fail"
  double margin = 0.0;  // worst slack observed (negative on fail)
  double estimate = 0.0;  // certified lower-bound estimate for A3
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double row_scale = 1.0;
  std::optional<ConditionWitness> witness;
  // decay curves k -> tilde(c^(k)) per trial (A2 only)
  std::vector<std::vector<double>> curves;
  std::vector<std::size_t> least_k;  // per (trial, epsilon) flattened (A2 only)
};

namespace detail {

// Shift pattern: rows t*e1, t*e1, t*e2, ..., t*e_{N-1+1} with a common t > 0.
inline std::optional<double> shift_pattern_scale(const CoeffMatrix& rows) {
  if (rows.rows() != rows.cols() + 1) return std::nullopt;
  const std::size_t n = rows.cols();
  const double t = rows(0, 0);
  if (!(t > 0.0)) return std::nullopt;
  auto is_scaled_unit = [&](std::size_t r, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) {
      const double want = (c == j) ? t : 0.0;
      if (std::abs(rows(r, c) - want) > 1e-12 * std::max(1.0, t)) return false;
    }
    return true;
  };
  if (!is_scaled_unit(0, 0)) return std::nullopt;
  for (std::size_t r = 1; r < rows.rows(); ++r)
    if (!is_scaled_unit(r, r - 1)) return std::nullopt;
  return t;
}

// The explicit shift-pattern certificate: r with g_1(r) = g_2(r) =
// max(|c_1+d_1|, |c_2+d_2|) and g_i(r) = |c_i+d_i| beyond.
inline CoeffVector shift_certificate(const CoeffVector& cd, double t, std::size_t n) {
  CoeffVector r(n);
  r[0] = std::max(std::abs(cd[0]), std::abs(cd[1])) / t;
  for (std::size_t kk = 1; kk < n; ++kk) r[kk] = std::abs(cd[kk + 1]) / t;
  return r;
}

}  // namespace detail

// A1: for feasible f, h of two constraint vectors from the analysis range,
// some r feasible for the sum satisfies |r| <= |f| + |h|. Certified via the
// closed-form r for shift-pattern frames, sampled through the minimizer of
// the solid norm otherwise.
inline ConditionReport check_A1(const FrameSystem& frame, std::size_t level, std::size_t trials,
                                std::uint64_t seed, const TildeOptions& topt = {}) {
  ConditionReport rep;
  rep.condition = "A1";
  rep.level = level;
  rep.trials = trials;
  rep.seed = seed;
  rep.margin = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  const std::size_t n = frame.truncation();
  const NormSpec& xs = frame.x_ladder().level(level);
  const auto shift_t = detail::shift_pattern_scale(frame.functionals());

  for (std::size_t trial = 0; trial < trials; ++trial) {
    CoeffVector f0 = rng.gaussian(n);
    CoeffVector h0 = rng.gaussian(n);
    const CoeffVector c = analyze(frame, f0);
    const CoeffVector d = analyze(frame, h0);
    // random feasible points dominate the sampled constraint vectors
    const CoeffVector f = (1.0 + rng.uniform()) * f0;
    const CoeffVector h = (1.0 + rng.uniform()) * h0;

    CoeffVector r;
    if (shift_t) {
      r = detail::shift_certificate(c + d, *shift_t, n);
    } else {
      ConstraintSet cs{c + d, level};
      TildeNormResult t = tilde_norm(frame, cs, topt);
      if (t.status == TildeStatus::Infeasible) {
        rep.verdict = "fail";
        rep.witness = ConditionWitness{c, d, f, h, CoeffVector(n), "sum constraint infeasible"};
        return rep;
      }
      r = t.minimizer;
    }

    // membership of r in the sum constraint set
    const CoeffVector gr = analyze(frame, r);
    for (std::size_t i = 0; i < gr.size(); ++i) {
      if (std::abs(gr[i]) + 1e-9 < std::abs(c[i] + d[i])) {
        rep.verdict = "fail";
        rep.witness = ConditionWitness{c, d, f, h, r, "certificate infeasible"};
        return rep;
      }
    }

    const double slack = norm(f, xs) + norm(h, xs) - norm(r, xs);
    rep.margin = std::min(rep.margin, slack);
    if (slack < -kDefaultTol) {
      rep.verdict = "fail";
      rep.witness = ConditionWitness{c, d, f, h, r, "norm bound violated"};
      return rep;
    }
  }
  rep.verdict = shift_t ? "pass" : "sampled-pass";
  return rep;
}

// A2: tails of constraint vectors admit arbitrarily small feasible points.
// Always satisfiable at truncation via full tail removal; the content is the
// non-increasing decay curve k -> tilde(c^(k)).
inline ConditionReport check_A2(const FrameSystem& frame, std::size_t level, std::size_t trials,
                                std::uint64_t seed, const TildeOptions& topt = {}) {
  ConditionReport rep;
  rep.condition = "A2";
  rep.level = level;
  rep.trials = trials;
  rep.seed = seed;
  rep.margin = std::numeric_limits<double>::infinity();
  rep.verdict = "pass";

  Rng rng(seed);
  const std::size_t m = frame.functional_count();
  const std::array<double, 3> eps_fractions{0.5, 0.1, 0.01};

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const CoeffVector c = analyze(frame, rng.gaussian(frame.truncation()));
    std::vector<double> curve(m + 1, 0.0);
    for (std::size_t k = 0; k <= m; ++k) {
      ConstraintSet cs{c.tail_from(k), level};
      TildeNormResult t = tilde_norm(frame, cs, topt);
      if (t.status == TildeStatus::Infeasible) {
        rep.verdict = "fail";
        rep.witness = ConditionWitness{c, {}, {}, {}, {}, "tail constraint set empty"};
        return rep;
      }
      curve[k] = t.value;
    }
    for (std::size_t k = 0; k + 1 <= m; ++k) {
      const double drop = curve[k] - curve[k + 1];
      rep.margin = std::min(rep.margin, drop);
      if (drop < -kDefaultTol) {
        rep.verdict = "fail";
        rep.witness = ConditionWitness{c, {}, {}, {}, {}, "decay curve increased"};
      }
    }
    for (double frac : eps_fractions) {
      const double eps = std::max(frac * curve[0], 1e-12);
      std::size_t least = m;
      for (std::size_t k = 0; k <= m; ++k)
        if (curve[k] < eps) {
          least = k;
          break;
        }
      rep.least_k.push_back(least);
    }
    rep.curves.push_back(std::move(curve));
  }
  return rep;
}

// A3: the solid norm of the coefficient image dominates A_s times the space
// norm; reports the certified infimum of the observed ratios.
inline ConditionReport check_A3(const FrameSystem& frame, std::size_t level, std::size_t trials,
                                std::uint64_t seed, double floor = 1.0 - kDefaultTol,
                                const TildeOptions& topt = {}) {
  ConditionReport rep;
  rep.condition = "A3";
  rep.level = level;
  rep.trials = trials;
  rep.seed = seed;

  Rng rng(seed);
  const std::size_t n = frame.truncation();
  const NormSpec& xs = frame.x_ladder().level(level);
  double inf_ratio = std::numeric_limits<double>::infinity();
  CoeffVector worst;

  std::vector<CoeffVector> probes;
  for (std::size_t i = 0; i < n; ++i) probes.push_back(CoeffVector::unit(n, i));
  for (std::size_t trial = 0; trial < trials; ++trial) probes.push_back(rng.gaussian(n));

  for (const auto& f : probes) {
    const double fn = norm(f, xs);
    if (fn <= 0.0) continue;
    ConstraintSet cs{analyze(frame, f), level};
    TildeNormResult t = tilde_norm(frame, cs, topt);
    if (t.status == TildeStatus::Infeasible) continue;  // f itself is feasible; unreachable
    const double ratio = t.value / fn;
    if (ratio < inf_ratio) {
      inf_ratio = ratio;
      worst = f;
    }
  }

  rep.estimate = inf_ratio;
  rep.margin = inf_ratio - floor;
  if (inf_ratio >= floor) {
    rep.verdict = "sampled-pass";
  } else {
    rep.verdict = "fail";
    rep.witness = ConditionWitness{analyze(frame, worst), {}, worst, {}, {}, "ratio below floor"};
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Construction: space ladder from a sequence ladder. Level 0 keeps the given
// base norm; level s >= 1 measures the coefficient image in the level-s
// sequence norm, which makes the frame exactly tight there.

struct XConstruction {
  SpaceLadder x_ladder;
  ThetaLadder theta_ladder;  // possibly uniformly rescaled so A_0 >= 1
  double theta_scale = 1.0;
  FrameBoundsEntry base_bounds;
  FrameSystem framed;  // the same functionals against (x_ladder, theta_ladder)
};

inline XConstruction construct_x_ladder(const ThetaLadder& theta, const FrameSystem& frame,
                                        const SampledOptOptions& opt = {}) {
  if (theta.truncation() != frame.functional_count())
    throw std::invalid_argument("construct_x_ladder: sequence truncation mismatch");

  FrameSystem base(frame.label(), frame.functionals(), frame.x_ladder(),
                   ThetaLadder(theta.label(), theta.truncation(),
                               {theta.level(0), theta.level(0)}));
  FrameBoundsEntry bounds = estimate_frame_bounds(base, 0, opt);
  if (bounds.lower_frame_fails)
    throw std::invalid_argument("construct_x_ladder: lower frame inequality fails at level 0");

  const double scale = bounds.lower < 1.0 ? 1.0 / bounds.lower : 1.0;
  std::vector<NormSpec> theta_levels;
  for (const auto& lv : theta.levels())
    theta_levels.push_back(scale == 1.0 ? lv : lv.scaled(scale));

  std::vector<NormSpec> x_levels;
  x_levels.push_back(frame.x_ladder().level(0));
  for (std::size_t s = 1; s < theta_levels.size(); ++s)
    x_levels.push_back(NormSpec::matrix_induced(frame.functionals(), theta_levels[s]));

  FrameBoundsEntry scaled_bounds = bounds;
  scaled_bounds.lower *= scale;
  scaled_bounds.upper *= scale;

  SpaceLadder x(frame.x_ladder().label() + ":induced", frame.truncation(), x_levels);
  ThetaLadder th(theta.label(), theta.truncation(), theta_levels, theta.bk_constants());
  FrameSystem framed(frame.label(), frame.functionals(), x, th);
  return XConstruction{std::move(x), std::move(th), scale, scaled_bounds, std::move(framed)};
}

// ---------------------------------------------------------------------------
// Construction: sequence ladder from a space ladder. The level-s norm of a
// coefficient vector is the level-s norm of its minimal preimage; realized
// through the pseudo-inverse, so off-range vectors get the norm of their
// projection and the off-range distance is reported separately.

struct ThetaConstruction {
  ThetaLadder ladder;
  bool canonical_in_range = false;
  double max_canonical_off_range = 0.0;
  std::string off_range_policy = "projection";
  FrameSystem framed;
};

inline double off_range_distance(const FrameSystem& frame, const CoeffVector& c) {
  const CoeffMatrix& u = frame.functionals();
  CoeffVector proj = u.mul(pseudo_inverse(u).mul(c));
  return l2(c - proj);
}

inline ThetaConstruction construct_theta_ladder(const SpaceLadder& x, const FrameSystem& frame) {
  const CoeffMatrix& u = frame.functionals();
  if (x.truncation() != frame.truncation())
    throw std::invalid_argument("construct_theta_ladder: truncation mismatch");
  if (rank_of(u) < frame.truncation())
    throw std::invalid_argument("construct_theta_ladder: analysis operator is rank deficient");

  CoeffMatrix uinv = pseudo_inverse(u);
  std::vector<NormSpec> levels;
  for (const auto& lv : x.levels()) levels.push_back(NormSpec::matrix_induced(uinv, lv));

  ThetaLadder th(x.label() + ":image", frame.functional_count(), levels);
  CoeffMatrix projector = u.mul(uinv);  // onto the coefficient range
  double worst = 0.0;
  for (std::size_t i = 0; i < frame.functional_count(); ++i) {
    CoeffVector e = CoeffVector::unit(frame.functional_count(), i);
    worst = std::max(worst, l2(e - projector.mul(e)));
  }

  FrameSystem framed(frame.label(), u, x, th);
  return ThetaConstruction{std::move(th), worst <= 1e-10, worst, "projection", std::move(framed)};
}

// ---------------------------------------------------------------------------
// Canonical-basis test through a biorthogonal sequence: with g_i(f_j) = d_ij,
// the coefficient prefixes converge iff the synthesis prefixes do, so the
// verdict is the sampled terminal residual plus uniformly bounded prefix
// operators.

struct CbLevelReport {
  std::size_t level = 0;
  double terminal_residual = 0.0;
  double prefix_operator_bound = 0.0;
  bool pass = false;
};

struct CbReport {
  std::vector<CbLevelReport> levels;
  double biorthogonality_defect = 0.0;
  bool pass = false;
};

inline CbReport cb_test_via_biorthogonal(const FrameSystem& frame, const CoeffMatrix& dual_vectors,
                                         const SpaceLadder& x, std::size_t samples = 100,
                                         std::uint64_t seed = 23) {
  const CoeffMatrix& u = frame.functionals();
  if (dual_vectors.rows() != frame.truncation() ||
      dual_vectors.cols() != frame.functional_count())
    throw std::invalid_argument("cb_test: dual shape mismatch");

  CoeffMatrix gram = u.mul(dual_vectors);
  double defect = 0.0;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j)
      defect = std::max(defect, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
  if (defect > 1e-10)
    throw std::invalid_argument("cb_test: biorthogonality violated (defect " +
                                std::to_string(defect) + ")");

  CbReport rep;
  rep.biorthogonality_defect = defect;
  Rng rng(seed);
  auto probes = detail::sample_vectors(frame.truncation(), samples, rng);
  const std::size_t m = frame.functional_count();

  for (std::size_t s = 0; s < x.level_count(); ++s) {
    CbLevelReport lev;
    lev.level = s;
    const NormSpec& xs = x.level(s);
    for (const auto& f : probes) {
      const double fn = norm(f, xs);
      const CoeffVector coef = u.mul(f);
      CoeffVector acc(f.size());
      double terminal = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < f.size(); ++r) acc[r] += coef[i] * dual_vectors(r, i);
        if (fn > 0.0)
          lev.prefix_operator_bound = std::max(lev.prefix_operator_bound, norm(acc, xs) / fn);
        terminal = norm(f - acc, xs);
      }
      lev.terminal_residual = std::max(lev.terminal_residual, terminal);
    }
    lev.pass = lev.terminal_residual <= 1e-8 && std::isfinite(lev.prefix_operator_bound);
    rep.levels.push_back(lev);
  }
  rep.pass = true;
  for (const auto& lev : rep.levels)
    if (!lev.pass) rep.pass = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Construction: sequence ladder from a verified expansion. The level-s norm
// is the sup over synthesis prefixes, realized as a closed-form spec.

inline ThetaLadder construct_theta_from_expansion(const SpaceLadder& x, const FrameSystem& frame,
                                                  const DualSequence& dual,
                                                  std::uint64_t seed = 31) {
  ExpansionReport check = verify_expansions(frame, dual, seed);
  if (!check.pass)
    throw std::invalid_argument("construct_theta_from_expansion: expansion identity fails");
  std::vector<NormSpec> levels;
  for (const auto& lv : x.levels())
    levels.push_back(NormSpec::synthesis_sup(dual.vectors, lv));
  // prefix truncation can only shrink the sup, so every level is 1-BK
  return ThetaLadder(x.label() + ":prefix-sup", frame.functional_count(), levels,
                     std::vector<double>(x.level_count(), 1.0));
}

// ---------------------------------------------------------------------------
// Theorem-surrogate checks shared by tests and the runner.

struct DominanceReport {
  double row_scale = 1.0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t trials = 0;
  bool pass = false;
};

// Solid-norm dominance: with rows normalized so the coefficient bound is at
// most one, tilde(c) >= |c| in the base sequence norm for c from the range.
inline DominanceReport check_norm_dominance(const FrameSystem& frame, const NormSpec& theta_base,
                                            std::size_t level, std::size_t trials,
                                            std::uint64_t seed, const TildeOptions& topt = {}) {
  NormalizedFrame nf = normalize_rows(frame, theta_base);
  DominanceReport rep;
  rep.row_scale = nf.row_scale;
  rep.trials = trials;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const CoeffVector c = analyze(nf.frame, rng.gaussian(frame.truncation()));
    TildeNormResult tn = tilde_norm(nf.frame, ConstraintSet{c, level}, topt);
    if (tn.status == TildeStatus::Infeasible) return rep;  // pass stays false
    rep.min_margin = std::min(rep.min_margin, tn.value - norm(c, theta_base));
  }
  rep.pass = rep.min_margin >= -kDefaultTol;
  return rep;
}

struct SolidityReport {
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t trials = 0;
  bool pass = false;
};

// Entrywise domination of constraint vectors shrinks the solid norm.
inline SolidityReport check_solidity(const FrameSystem& frame, std::size_t level,
                                     std::size_t trials, std::uint64_t seed,
                                     const TildeOptions& topt = {}) {
  SolidityReport rep;
  rep.trials = trials;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const CoeffVector c = analyze(frame, rng.gaussian(frame.truncation()));
    CoeffVector d(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) d[i] = c[i] * rng.uniform();
    const TildeNormResult tc = tilde_norm(frame, ConstraintSet{c, level}, topt);
    const TildeNormResult td = tilde_norm(frame, ConstraintSet{d, level}, topt);
    if (tc.status != TildeStatus::Optimal || td.status != TildeStatus::Optimal) return rep;
    rep.min_margin = std::min(rep.min_margin, tc.value - td.value);
  }
  rep.pass = rep.min_margin >= -kDefaultTol;
  return rep;
}

// Coefficient images are feasible for their own constraint sets, so the solid
// norm never exceeds the space norm (upper bound one).
inline SolidityReport check_bessel_bound_one(const FrameSystem& frame, std::size_t level,
                                             std::size_t trials, std::uint64_t seed,
                                             const TildeOptions& topt = {}) {
  SolidityReport rep;
  rep.trials = trials;
  Rng rng(seed);
  const NormSpec& xs = frame.x_ladder().level(level);
  for (std::size_t t = 0; t < trials; ++t) {
    const CoeffVector f = rng.gaussian(frame.truncation());
    const TildeNormResult tn = tilde_norm(frame, ConstraintSet{analyze(frame, f), level}, topt);
    if (tn.status != TildeStatus::Optimal) return rep;
    rep.min_margin = std::min(rep.min_margin, norm(f, xs) - tn.value);
  }
  rep.pass = rep.min_margin >= -kDefaultTol;
  return rep;
}

}  // namespace framekit
