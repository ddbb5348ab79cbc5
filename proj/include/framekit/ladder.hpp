#pragma once

// Graded families of norms on one truncated coefficient model, plus sampled
// checks of the nesting axioms (norm monotonicity across levels, bounded
// coordinates, prefix-truncation constants).

#include <cstdint>
#include <string>
#include <vector>

#include "framekit/numeric.hpp"

namespace framekit {

namespace detail {

inline void validate_levels(const std::vector<NormSpec>& levels, std::size_t truncation) {
  if (levels.size() < 2) throw std::invalid_argument("ladder: need at least two levels");
  if (truncation == 0) throw std::invalid_argument("ladder: truncation must be positive");
  for (const auto& s : levels)
    if (s.dim() != 0 && s.dim() != truncation)
      throw std::invalid_argument("ladder: level dimension does not match truncation");
}

}  // namespace detail

// Family of norms |.|_s, s = 0..S, on R^truncation. Levels are stored as
// closed-form NormSpec so evaluation is exact; axiom violations are detected
// by the checker rather than rejected at construction (negative controls are
// representable).
class SpaceLadder {
 public:
  SpaceLadder(std::string label, std::size_t truncation, std::vector<NormSpec> levels)
      : label_(std::move(label)), truncation_(truncation), levels_(std::move(levels)) {
    detail::validate_levels(levels_, truncation_);
  }

  const std::string& label() const { return label_; }
  std::size_t truncation() const { return truncation_; }
  std::size_t level_count() const { return levels_.size(); }
  const NormSpec& level(std::size_t s) const {
    if (s >= levels_.size()) throw std::invalid_argument("ladder: level out of range");
    return levels_[s];
  }
  const std::vector<NormSpec>& levels() const { return levels_; }

  double norm_at(const CoeffVector& v, std::size_t s) const { return norm(v, level(s)); }

 private:
  std::string label_;
  std::size_t truncation_;
  std::vector<NormSpec> levels_;
};

// Sequence-space side: same storage plus prefix-truncation constants
// lambda_s >= 1 per level (declared by the builder, re-measured by
// measure_lambda).
class ThetaLadder {
 public:
  ThetaLadder(std::string label, std::size_t truncation, std::vector<NormSpec> levels,
              std::vector<double> bk_constants = {})
      : label_(std::move(label)), truncation_(truncation), levels_(std::move(levels)),
        bk_(std::move(bk_constants)) {
    detail::validate_levels(levels_, truncation_);
    if (bk_.empty()) bk_.assign(levels_.size(), 1.0);
    if (bk_.size() != levels_.size())
      throw std::invalid_argument("theta ladder: one bk constant per level expected");
    for (double l : bk_)
      if (!(l >= 1.0)) throw std::invalid_argument("theta ladder: bk constants must be >= 1");
  }

  const std::string& label() const { return label_; }
  std::size_t truncation() const { return truncation_; }
  std::size_t level_count() const { return levels_.size(); }
  const NormSpec& level(std::size_t s) const {
    if (s >= levels_.size()) throw std::invalid_argument("ladder: level out of range");
    return levels_[s];
  }
  const std::vector<NormSpec>& levels() const { return levels_; }
  const std::vector<double>& bk_constants() const { return bk_; }

  double norm_at(const CoeffVector& v, std::size_t s) const { return norm(v, level(s)); }

 private:
  std::string label_;
  std::size_t truncation_;
  std::vector<NormSpec> levels_;
  std::vector<double> bk_;
};

struct AxiomReport {
  std::string label;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  // max over sampled v and levels s of max(0, |v|_s - |v|_{s+1})
  double monotonicity_violation = 0.0;
  bool pass = false;
  // theta-side measurements (empty for space ladders)
  std::vector<double> lambda_measured;                 // per level
  std::vector<std::vector<double>> coordinate_bounds;  // per level, per coordinate K_{i,s}
  bool canonical_vectors_ok = true;  // every |e_i|_s finite and positive
  // finite-span density convention: the full canonical prefix reproduces each
  // sampled vector in every level norm (structural at truncation, kept as a
  // regression guard)
  double density_guard_residual = 0.0;
};

namespace detail {

inline std::vector<CoeffVector> sample_vectors(std::size_t n, std::size_t samples, Rng& rng) {
  std::vector<CoeffVector> out;
  out.reserve(samples + n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(CoeffVector::unit(n, i));
  for (std::size_t k = 0; k + n < samples + n; ++k) out.push_back(rng.gaussian(n));
  return out;
}

template <typename Ladder>
inline AxiomReport check_axioms_impl(const Ladder& ladder, std::size_t samples,
                                     std::uint64_t seed, bool theta_side) {
  if (samples < 1) throw std::invalid_argument("check_ladder_axioms: samples >= 1 required");
  AxiomReport rep;
  rep.label = ladder.label();
  rep.samples = samples;
  rep.seed = seed;

  Rng rng(seed);
  const std::size_t n = ladder.truncation();
  const std::size_t levels = ladder.level_count();
  auto vs = sample_vectors(n, samples, rng);

  for (const auto& v : vs) {
    double prev = ladder.norm_at(v, 0);
    for (std::size_t s = 1; s < levels; ++s) {
      const double cur = ladder.norm_at(v, s);
      rep.monotonicity_violation = std::max(rep.monotonicity_violation, prev - cur);
      prev = cur;
    }
    for (std::size_t s = 0; s < levels; ++s) {
      const double full = ladder.norm_at(v - v.prefix(n), s);
      rep.density_guard_residual = std::max(rep.density_guard_residual, full);
    }
  }
  rep.monotonicity_violation = std::max(rep.monotonicity_violation, 0.0);

  if (theta_side) {
    rep.lambda_measured.assign(levels, 1.0);
    rep.coordinate_bounds.assign(levels, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < levels; ++s) {
      for (const auto& v : vs) {
        const double full = ladder.norm_at(v, s);
        if (full <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
          rep.coordinate_bounds[s][i] =
              std::max(rep.coordinate_bounds[s][i], std::abs(v[i]) / full);
        for (std::size_t k = 1; k < n; ++k) {
          const double pre = ladder.norm_at(v.prefix(k), s);
          rep.lambda_measured[s] = std::max(rep.lambda_measured[s], pre / full);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double e = ladder.norm_at(CoeffVector::unit(n, i), s);
        if (!(e > 0.0) || !std::isfinite(e)) rep.canonical_vectors_ok = false;
      }
    }
  }

  rep.pass = rep.monotonicity_violation <= kDefaultTol && rep.canonical_vectors_ok &&
             rep.density_guard_residual <= kDefaultTol;
  return rep;
}

}  // namespace detail

inline AxiomReport check_ladder_axioms(const SpaceLadder& ladder, std::size_t samples = 500,
                                       std::uint64_t seed = 1) {
  return detail::check_axioms_impl(ladder, samples, seed, /*theta_side=*/false);
}

inline AxiomReport check_ladder_axioms(const ThetaLadder& ladder, std::size_t samples = 500,
                                       std::uint64_t seed = 1) {
  return detail::check_axioms_impl(ladder, samples, seed, /*theta_side=*/true);
}

// Measured prefix-truncation constant at one level: sup over sampled c and
// prefixes of |c_1..c_k|_s / |c|_s, clamped below at 1.
inline double measure_lambda(const ThetaLadder& theta, std::size_t s, std::size_t samples = 500,
                             std::uint64_t seed = 1) {
  if (s >= theta.level_count()) throw std::invalid_argument("measure_lambda: level out of range");
  Rng rng(seed);
  const std::size_t n = theta.truncation();
  double sup = 1.0;
  auto vs = detail::sample_vectors(n, samples, rng);
  // sign-alternating probes surface prefix inflation under induced norms
  for (std::size_t i = 0; i + 1 < n && i < 8; ++i) {
    CoeffVector v(n);
    for (std::size_t j = 0; j <= i + 1; ++j) v[j] = (j % 2 == 0) ? 1.0 : -0.5;
    vs.push_back(v);
  }
  for (const auto& v : vs) {
    const double full = theta.norm_at(v, s);
    if (full <= 0.0) continue;
    for (std::size_t k = 1; k < n; ++k)
      sup = std::max(sup, theta.norm_at(v.prefix(k), s) / full);
  }
  return sup;
}

}  // namespace framekit
