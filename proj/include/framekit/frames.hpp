#pragma once

// Frame systems at truncation: the analysis operator as a dense matrix, per
// level frame-bound estimation (exact SVD route for quadratic norms, seeded
// multi-start optimization otherwise), dual sequences from the whitened
// pseudo-inverse, and verification of the series expansions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framekit/ladder.hpp"
#include "framekit/numeric.hpp"

namespace framekit {

class FrameSystem {
 public:
  FrameSystem(std::string label, CoeffMatrix functionals, SpaceLadder x_ladder,
              ThetaLadder theta_ladder)
      : label_(std::move(label)), functionals_(std::move(functionals)),
        x_ladder_(std::move(x_ladder)), theta_ladder_(std::move(theta_ladder)) {
    if (!functionals_.all_finite())
      throw std::invalid_argument("frame: non-finite functionals");
    if (functionals_.cols() != x_ladder_.truncation())
      throw std::invalid_argument("frame: row length must equal the space truncation");
    if (functionals_.rows() != theta_ladder_.truncation())
      throw std::invalid_argument("frame: row count must equal the sequence truncation");
    for (std::size_t i = 0; i < functionals_.rows(); ++i)
      if (l2(functionals_.row(i)) == 0.0)
        throw std::invalid_argument("frame: zero functional row");
  }

  const std::string& label() const { return label_; }
  const CoeffMatrix& functionals() const { return functionals_; }
  const SpaceLadder& x_ladder() const { return x_ladder_; }
  const ThetaLadder& theta_ladder() const { return theta_ladder_; }

  std::size_t functional_count() const { return functionals_.rows(); }
  std::size_t truncation() const { return functionals_.cols(); }
  std::size_t level_count() const {
    return std::min(x_ladder_.level_count(), theta_ladder_.level_count());
  }

  FrameSystem with_scaled_rows(double t) const {
    CoeffMatrix m = functionals_;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= t;
    return FrameSystem(label_, std::move(m), x_ladder_, theta_ladder_);
  }

 private:
  std::string label_;
  CoeffMatrix functionals_;
  SpaceLadder x_ladder_;
  ThetaLadder theta_ladder_;
};

// Uf = {g_i(f)} by exact matrix-vector product.
inline CoeffVector analyze(const FrameSystem& frame, const CoeffVector& f) {
  if (f.size() != frame.truncation()) throw std::invalid_argument("analyze: dimension mismatch");
  return frame.functionals().mul(f);
}

// ---------------------------------------------------------------------------
// Extremes of v -> norm(T v, to) / norm(v, from). Shared by frame bounds and
// by reconstruction-operator norms.

struct SampledOptOptions {
  std::size_t starts = 200;
  std::size_t iterations = 150;
  std::uint64_t seed = 7;
};

struct OperatorExtremes {
  double lo = 0.0;
  double hi = 0.0;
  std::string method;  // "svd" | "sampled-optimization"
  std::size_t samples = 0;
  bool rank_deficient = false;
};

namespace detail {

inline double ratio_of(const CoeffMatrix& t, const NormSpec& from, const NormSpec& to,
                       const CoeffVector& v) {
  const double d = norm(v, from);
  if (d <= 0.0) return 0.0;
  return norm(t.mul(v), to) / d;
}

// Projected (sub)gradient ascent/descent of the log-ratio on the from-norm
// unit sphere. Inner estimates only; callers label the method.
inline double local_opt_ratio(const CoeffMatrix& t, const NormSpec& from, const NormSpec& to,
                              CoeffVector v, bool maximize, std::size_t iterations) {
  double denom = norm(v, from);
  if (denom <= 0.0) return 0.0;
  v = (1.0 / denom) * v;
  double best = ratio_of(t, from, to, v);
  double step = 0.25;
  for (std::size_t it = 0; it < iterations && step > 1e-12; ++it) {
    const CoeffVector tv = t.mul(v);
    const double num = norm(tv, to);
    const double den = norm(v, from);
    if (num <= 0.0 || den <= 0.0) break;
    CoeffVector gn = t.tmul(norm_gradient(tv, to));
    CoeffVector gd = norm_gradient(v, from);
    CoeffVector dir(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      dir[i] = gn[i] / num - gd[i] / den;
    if (!maximize) dir = -1.0 * dir;
    CoeffVector cand = v + step * dir;
    const double len = norm(cand, from);
    if (len <= 0.0) {
      step *= 0.5;
      continue;
    }
    cand = (1.0 / len) * cand;
    const double val = ratio_of(t, from, to, cand);
    if ((maximize && val > best) || (!maximize && val < best)) {
      best = val;
      v = cand;
      step *= 1.2;
    } else {
      step *= 0.5;
    }
  }
  return best;
}

}  // namespace detail

inline OperatorExtremes operator_extremes(const CoeffMatrix& t, const NormSpec& from,
                                          const NormSpec& to,
                                          const SampledOptOptions& opt = {}) {
  OperatorExtremes out;
  const std::size_t n = t.cols();
  if (rank_of(t) < n) out.rank_deficient = true;

  auto gf = l2_factor(from, n);
  auto gt = l2_factor(to, t.rows());
  if (gf && gt) {
    SvdResult fs = svd(*gf);
    if (fs.sigma[fs.sigma.size() - 1] > 1e-12 * std::max(1.0, fs.sigma[0])) {
      // substitute y = Gf v over R(Gf): extremes of (Gt T Gf^+) on that range
      CoeffMatrix m = gt->mul(t).mul(pseudo_inverse(*gf)).mul(fs.u);
      SvdResult ms = svd(m);
      out.method = "svd";
      out.hi = ms.sigma[0];
      out.lo = ms.sigma[ms.sigma.size() - 1];
      if (out.rank_deficient) out.lo = 0.0;
      return out;
    }
  }

  out.method = "sampled-optimization";
  Rng rng(opt.seed);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t used = 0;
  auto consider = [&](const CoeffVector& v) {
    if (norm(v, from) <= 0.0) return;
    ++used;
    hi = std::max(hi, detail::local_opt_ratio(t, from, to, v, true, opt.iterations));
    lo = std::min(lo, detail::local_opt_ratio(t, from, to, v, false, opt.iterations));
  };
  for (std::size_t i = 0; i < n && i < 32; ++i) consider(CoeffVector::unit(n, i));
  for (std::size_t k = 0; k < opt.starts; ++k) consider(rng.gaussian(n));
  out.samples = used;
  out.lo = out.rank_deficient ? 0.0 : (std::isfinite(lo) ? lo : 0.0);
  out.hi = hi;
  return out;
}

// ---------------------------------------------------------------------------
// Frame bounds per level.

struct FrameBoundsEntry {
  std::size_t level = 0;
  double lower = 0.0;  // A_s
  double upper = 0.0;  // B_s
  bool tight = false;  // |A_s - B_s| <= 1e-9
  std::string method;
  std::size_t samples = 0;
  bool lower_frame_fails = false;
};

struct FrameBounds {
  std::vector<FrameBoundsEntry> levels;

  const FrameBoundsEntry& at(std::size_t s) const {
    for (const auto& e : levels)
      if (e.level == s) return e;
    throw std::invalid_argument("frame bounds: level missing");
  }
};

inline FrameBoundsEntry estimate_frame_bounds(const FrameSystem& frame, std::size_t s,
                                              const SampledOptOptions& opt = {}) {
  if (s >= frame.level_count())
    throw std::invalid_argument("estimate_frame_bounds: level out of range");
  OperatorExtremes ex = operator_extremes(frame.functionals(), frame.x_ladder().level(s),
                                          frame.theta_ladder().level(s), opt);
  FrameBoundsEntry e;
  e.level = s;
  e.lower = ex.lo;
  e.upper = ex.hi;
  e.method = ex.method;
  e.samples = ex.samples;
  e.lower_frame_fails = ex.rank_deficient || !(e.lower > 0.0);
  e.tight = !e.lower_frame_fails && std::abs(e.lower - e.upper) <= kDefaultTol;
  return e;
}

inline FrameBounds estimate_frame_bounds(const FrameSystem& frame,
                                         const SampledOptOptions& opt = {}) {
  FrameBounds b;
  for (std::size_t s = 0; s < frame.level_count(); ++s)
    b.levels.push_back(estimate_frame_bounds(frame, s, opt));
  return b;
}

// ---------------------------------------------------------------------------
// Dual sequence f_i = V e_i.

struct DualSequence {
  CoeffMatrix vectors = CoeffMatrix(1, 1);  // N x M, column i = f_i
  std::string provenance;                   // "pseudo-inverse" | "closed-form"
  std::size_t built_at_level = 0;
  // K_s with |V c|_s <= K_s |c|_s per level, measured on the reconstruction map.
  std::vector<double> reconstruction_norms;
  std::vector<std::string> reconstruction_norm_methods;
};

// Orthogonal-projection realization in the level-s whitened geometry when both
// level norms factor quadratically; otherwise the plain l2 pseudo-inverse as
// the bounded-extension candidate.
inline DualSequence dual_sequence(const FrameSystem& frame, std::size_t s,
                                  const SampledOptOptions& opt = {}) {
  FrameBoundsEntry bounds = estimate_frame_bounds(frame, s, opt);
  if (bounds.lower_frame_fails)
    throw std::invalid_argument("dual_sequence: lower frame inequality fails");

  const CoeffMatrix& u = frame.functionals();
  const std::size_t n = frame.truncation();
  DualSequence d;
  d.built_at_level = s;
  d.provenance = "pseudo-inverse";

  auto gx = l2_factor(frame.x_ladder().level(s), n);
  auto gt = l2_factor(frame.theta_ladder().level(s), frame.functional_count());
  bool whitened = false;
  if (gx && gt) {
    SvdResult xs = svd(*gx);
    if (xs.sigma[xs.sigma.size() - 1] > 1e-12 * std::max(1.0, xs.sigma[0])) {
      // V = Gx^-1 (Gt U Gx^-1)^+ Gt
      CoeffMatrix gxinv = pseudo_inverse(*gx);
      CoeffMatrix white = gt->mul(u).mul(gxinv);
      d.vectors = gxinv.mul(pseudo_inverse(white)).mul(*gt);
      whitened = true;
    }
  }
  if (!whitened) d.vectors = pseudo_inverse(u);

  for (std::size_t lev = 0; lev < frame.level_count(); ++lev) {
    OperatorExtremes ex = operator_extremes(d.vectors, frame.theta_ladder().level(lev),
                                            frame.x_ladder().level(lev), opt);
    d.reconstruction_norms.push_back(ex.hi);
    d.reconstruction_norm_methods.push_back(ex.method);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Series-expansion verification.

struct ExpansionLevelReport {
  std::size_t level = 0;
  double residual_primal = 0.0;
  double residual_dual = 0.0;
  std::vector<double> partial_sum_decay;  // index n-1 -> max residual with n terms
};

struct ExpansionReport {
  std::vector<ExpansionLevelReport> levels;
  bool pass = false;
  double tolerance = 1e-8;

  const ExpansionLevelReport& at(std::size_t s) const {
    for (const auto& e : levels)
      if (e.level == s) return e;
    throw std::invalid_argument("expansion report: level missing");
  }
};

inline std::vector<CoeffVector> default_test_vectors(std::size_t n, std::size_t extra = 16,
                                                     std::uint64_t seed = 11) {
  Rng rng(seed);
  return detail::sample_vectors(n, extra, rng);
}

// Primal: max over test f of |f - sum_{i<=n} g_i(f) f_i|_s for n = 1..M.
// Dual: the induced coefficient functionals are compared against each supplied
// test functional in the level-s dual norm; exact at truncation.
inline ExpansionReport verify_expansions(const FrameSystem& frame, const DualSequence& dual,
                                         const std::vector<CoeffVector>& test_vectors,
                                         const std::vector<CoeffVector>& test_functionals,
                                         double pass_tol = 1e-8) {
  const CoeffMatrix& u = frame.functionals();
  const CoeffMatrix& fmat = dual.vectors;
  if (fmat.rows() != frame.truncation() || fmat.cols() != frame.functional_count())
    throw std::invalid_argument("verify_expansions: dual shape mismatch");

  ExpansionReport rep;
  rep.tolerance = pass_tol;
  const std::size_t m = frame.functional_count();

  for (std::size_t s = 0; s < frame.level_count(); ++s) {
    ExpansionLevelReport lev;
    lev.level = s;
    lev.partial_sum_decay.assign(m, 0.0);
    const NormSpec& xs = frame.x_ladder().level(s);

    for (const auto& f : test_vectors) {
      const CoeffVector coef = u.mul(f);
      CoeffVector acc(f.size());
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < f.size(); ++r) acc[r] += coef[i] * fmat(r, i);
        lev.partial_sum_decay[i] = std::max(lev.partial_sum_decay[i], norm(f - acc, xs));
      }
      lev.residual_primal = std::max(lev.residual_primal, norm(f - acc, xs));
    }

    for (const auto& w : test_functionals) {
      if (w.size() != frame.truncation())
        throw std::invalid_argument("verify_expansions: functional dimension mismatch");
      // sum_i w(f_i) g_i as a coefficient functional
      CoeffVector through = u.tmul(fmat.tmul(w));
      lev.residual_dual = std::max(lev.residual_dual, dual_norm(w - through, xs));
    }

    rep.levels.push_back(std::move(lev));
  }

  rep.pass = true;
  for (const auto& lev : rep.levels)
    if (lev.residual_primal > pass_tol || lev.residual_dual > pass_tol) rep.pass = false;
  return rep;
}

inline ExpansionReport verify_expansions(const FrameSystem& frame, const DualSequence& dual,
                                         std::uint64_t seed = 11, double pass_tol = 1e-8) {
  const std::size_t n = frame.truncation();
  auto vecs = default_test_vectors(n, 16, seed);
  auto funcs = default_test_vectors(n, 8, seed + 1);
  return verify_expansions(frame, dual, vecs, funcs, pass_tol);
}

// ---------------------------------------------------------------------------
// Range diagnostics: rank of the analysis operator and the per-level bound
// 1/A_s on its inverse. Closedness is structural at finite rank.

struct RangeReport {
  std::size_t rank = 0;
  bool full_rank = false;
  bool closed = true;  // structural at truncation
  std::vector<double> inverse_bounds;  // 1/A_s, infinity when the lower bound fails
  std::vector<bool> lower_frame_fails;
};

inline RangeReport check_range_closed(const FrameSystem& frame,
                                      const SampledOptOptions& opt = {}) {
  RangeReport r;
  r.rank = rank_of(frame.functionals());
  r.full_rank = r.rank == frame.truncation();
  for (std::size_t s = 0; s < frame.level_count(); ++s) {
    FrameBoundsEntry b = estimate_frame_bounds(frame, s, opt);
    r.lower_frame_fails.push_back(b.lower_frame_fails);
    r.inverse_bounds.push_back(b.lower_frame_fails
                                   ? std::numeric_limits<double>::infinity()
                                   : 1.0 / b.lower);
  }
  return r;
}

}  // namespace framekit
