#pragma once

// Ready-made (ladder, frame) instances used by tests and the runner:
// an eigenvalue-weighted Hilbert ladder with coordinate functionals, the
// weighted shift frame with its constrained-infimum sequence ladder, a finite
// circular stand-in for shift-invariant spaces with decreasing exponents, and
// the coordinate model on an arbitrary sequence ladder.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framekit/constructions.hpp"
#include "framekit/frames.hpp"
#include "framekit/ladder.hpp"
#include "framekit/numeric.hpp"

namespace framekit {

struct ModelSpec {
  std::string name;
  std::size_t truncation = 8;   // N
  std::size_t level_count = 4;  // S + 1
  std::vector<std::vector<double>> weights;  // per level, per index (when applicable)
  std::vector<double> taps;                  // circular generator (lp model)
};

struct ModelBundle {
  ModelSpec spec;
  SpaceLadder x_ladder;
  ThetaLadder theta_ladder;
  FrameSystem frame;
  std::optional<DualSequence> dual;
  std::vector<std::pair<std::string, std::string>> notes;
};

// a_{i,s} = (2i-1)^s, the oscillator-eigenvalue weights.
inline double hermite_weight(std::size_t i, std::size_t s) {
  return std::pow(2.0 * static_cast<double>(i) - 1.0, static_cast<double>(s));
}

inline std::vector<std::vector<double>> default_shift_weights(std::size_t n, std::size_t levels) {
  std::vector<std::vector<double>> w(levels, std::vector<double>(n, 1.0));
  for (std::size_t s = 0; s < levels; ++s)
    for (std::size_t i = 0; i < n; ++i) w[s][i] = hermite_weight(i + 1, s);
  return w;
}

inline std::vector<double> lp_exponents(std::size_t levels) {
  std::vector<double> p(levels);
  for (std::size_t s = 0; s < levels; ++s) p[s] = 1.0 + 1.0 / (static_cast<double>(s) + 1.0);
  return p;
}

// Standard sequence ladder with decreasing exponents p_s = 1 + 1/(s+1).
inline ThetaLadder lp_theta_ladder(std::size_t truncation, std::size_t levels,
                                   std::string label = "lp-ladder") {
  std::vector<NormSpec> specs;
  for (double p : lp_exponents(levels)) specs.push_back(NormSpec::lp(p));
  return ThetaLadder(std::move(label), truncation, std::move(specs),
                     std::vector<double>(levels, 1.0));
}

namespace detail {

inline void validate_weight_table(const std::vector<std::vector<double>>& w, std::size_t n) {
  if (w.size() < 2) throw std::invalid_argument("model: at least two weight levels required");
  for (const auto& row : w) {
    if (row.size() != n) throw std::invalid_argument("model: weight row length mismatch");
    for (double x : row)
      if (!(x >= 1.0) || !std::isfinite(x))
        throw std::invalid_argument("model: weights must be finite and >= 1");
  }
  for (std::size_t s = 0; s + 1 < w.size(); ++s)
    for (std::size_t i = 0; i < n; ++i)
      if (w[s][i] > w[s + 1][i] + 1e-12)
        throw std::invalid_argument("model: weights must be nondecreasing across levels");
}

inline CoeffMatrix shift_rows(std::size_t n) {
  CoeffMatrix rows(n + 1, n);
  rows(0, 0) = 1.0;
  for (std::size_t i = 1; i <= n; ++i) rows(i, i - 1) = 1.0;
  return rows;
}

inline std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -6.283185307179586476925287 * static_cast<double>(j * k) /
                         static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<double> idft_real(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = 6.283185307179586476925287 * static_cast<double>(j * k) /
                         static_cast<double>(n);
      acc += x[k] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[j] = acc.real() / static_cast<double>(n);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Oscillator-eigenvalue model: coordinate functionals against the weighted
// ladder; the canonical basis is its own dual.

inline ModelBundle build_hermite_model(std::size_t n, std::size_t s_max) {
  if (n < 1 || s_max < 1) throw std::invalid_argument("hermite model: N, S >= 1 required");
  const std::size_t levels = s_max + 1;

  std::vector<NormSpec> x_levels;
  for (std::size_t s = 0; s < levels; ++s) {
    CoeffVector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = hermite_weight(i + 1, s);
    x_levels.push_back(NormSpec::weighted_l2(w));
  }
  SpaceLadder x("hermite", n, x_levels);
  ThetaLadder theta("hermite-coeff", n, x_levels, std::vector<double>(levels, 1.0));
  FrameSystem frame("hermite-coordinate", CoeffMatrix::identity(n), x, theta);

  DualSequence dual;
  dual.vectors = CoeffMatrix::identity(n);
  dual.provenance = "closed-form";
  for (std::size_t s = 0; s < levels; ++s) {
    OperatorExtremes ex = operator_extremes(dual.vectors, theta.level(s), x.level(s));
    dual.reconstruction_norms.push_back(ex.hi);
    dual.reconstruction_norm_methods.push_back(ex.method);
  }

  ModelSpec spec;
  spec.name = "hermite";
  spec.truncation = n;
  spec.level_count = levels;
  return ModelBundle{std::move(spec), std::move(x), std::move(theta), std::move(frame),
                     std::move(dual), {}};
}

// ---------------------------------------------------------------------------
// Weighted shift model: rows e1, e1, e2, ..., e_N against the weighted
// ladder; the sequence side is the constrained-infimum ladder, which has the
// closed form sqrt(a_1^2 max(|c_1|,|c_2|)^2 + sum a_k^2 c_{k+1}^2) here and
// makes the frame exactly tight level by level.

inline ModelBundle build_weighted_shift_model(std::vector<std::vector<double>> weights,
                                              std::size_t n, std::size_t s_max) {
  if (n < 2 || s_max < 1) throw std::invalid_argument("shift model: N >= 2, S >= 1 required");
  const std::size_t levels = s_max + 1;
  if (weights.empty()) weights = default_shift_weights(n, levels);
  detail::validate_weight_table(weights, n);
  if (weights.size() != levels) throw std::invalid_argument("shift model: level count mismatch");

  std::vector<NormSpec> x_levels, theta_levels;
  for (std::size_t s = 0; s < levels; ++s) {
    CoeffVector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = weights[s][i];
    x_levels.push_back(NormSpec::weighted_l2(w));
    theta_levels.push_back(NormSpec::shift_tilde(w));
  }
  SpaceLadder x("weighted-shift", n, x_levels);
  ThetaLadder theta("weighted-shift-solid", n + 1, theta_levels,
                    std::vector<double>(levels, 1.0));
  FrameSystem frame("weighted-shift", detail::shift_rows(n), x, theta);

  ModelSpec spec;
  spec.name = "weighted_shift";
  spec.truncation = n;
  spec.level_count = levels;
  spec.weights = std::move(weights);
  ModelBundle b{std::move(spec), std::move(x), std::move(theta), std::move(frame),
                std::nullopt, {}};
  b.notes.emplace_back("sequence_ladder",
                       "constrained-infimum solid norms in closed form for the shift pattern");
  return b;
}

inline ModelBundle build_weighted_shift_model(std::size_t n, std::size_t s_max) {
  return build_weighted_shift_model({}, n, s_max);
}

// ---------------------------------------------------------------------------
// Circular shift-invariant model: translates of a generator on Z_N, sequence
// norms with exponents p_s = 1 + 1/(s+1), space norms induced through the
// analysis operator, dual generator by Fourier division.

inline ModelBundle build_lp_shift_model(std::vector<double> taps, std::size_t n,
                                        std::size_t s_max) {
  if (n < 2 || s_max < 1) throw std::invalid_argument("lp model: N >= 2, S >= 1 required");
  if (taps.empty() || taps.size() > n) throw std::invalid_argument("lp model: bad generator");
  taps.resize(n, 0.0);

  auto symbol = detail::dft(taps);
  double symbol_min = std::numeric_limits<double>::infinity(), symbol_max = 0.0;
  for (const auto& z : symbol) {
    symbol_min = std::min(symbol_min, std::abs(z));
    symbol_max = std::max(symbol_max, std::abs(z));
  }
  if (symbol_min <= 1e-12 * std::max(1.0, symbol_max))
    throw std::invalid_argument("lp model: vanishing Fourier symbol, no dual generator");

  CoeffMatrix rows(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) rows(k, j) = taps[(j + n - k) % n];

  const std::size_t levels = s_max + 1;
  ThetaLadder theta = lp_theta_ladder(n, levels, "lp-circular");

  // base frame on the plain quadratic norms, then induce the space ladder
  std::vector<NormSpec> l2_levels(2, NormSpec::l2());
  SpaceLadder base_x("lp-base", n, l2_levels);
  FrameSystem base(
      "lp-translates", rows, base_x,
      ThetaLadder("lp-base-theta", n, {NormSpec::l2(), NormSpec::l2()}));
  XConstruction cx = construct_x_ladder(theta, base);

  // dual generator: divide the symbol by its squared magnitude
  std::vector<std::complex<double>> psi_hat(n);
  for (std::size_t k = 0; k < n; ++k) psi_hat[k] = symbol[k] / std::norm(symbol[k]);
  std::vector<double> psi = detail::idft_real(psi_hat);

  DualSequence dual;
  dual.provenance = "closed-form";
  dual.vectors = CoeffMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) dual.vectors(j, k) = psi[(j + n - k) % n];
  for (std::size_t s = 0; s < cx.framed.level_count(); ++s) {
    OperatorExtremes ex = operator_extremes(dual.vectors, cx.theta_ladder.level(s),
                                            cx.x_ladder.level(s));
    dual.reconstruction_norms.push_back(ex.hi);
    dual.reconstruction_norm_methods.push_back(ex.method);
  }

  ModelSpec spec;
  spec.name = "lp_shift_invariant";
  spec.truncation = n;
  spec.level_count = levels;
  spec.taps = std::move(taps);
  ModelBundle b{std::move(spec), cx.x_ladder, cx.theta_ladder, cx.framed, std::move(dual), {}};
  b.notes.emplace_back("surrogate",
                       "finite circular translates stand in for shift-invariant subspaces; "
                       "closed range and the ladder frame property become finite statements");
  b.notes.emplace_back("dual_generator",
                       "single dual generator by construction, so independence from the "
                       "exponent is structural here and not a tested claim");
  return b;
}

// ---------------------------------------------------------------------------
// Coordinate model: the sequence ladder itself, with coordinate functionals.

inline ModelBundle build_coordinate_model(const ThetaLadder& theta) {
  const std::size_t n = theta.truncation();
  std::vector<NormSpec> base_levels{theta.level(0), theta.level(0)};
  SpaceLadder base_x("coordinate-base", n, base_levels);
  FrameSystem base("coordinate", CoeffMatrix::identity(n), base_x,
                   ThetaLadder(theta.label(), n, base_levels));
  XConstruction cx = construct_x_ladder(theta, base);

  DualSequence dual;
  dual.vectors = CoeffMatrix::identity(n);
  dual.provenance = "closed-form";
  for (std::size_t s = 0; s < cx.framed.level_count(); ++s) {
    OperatorExtremes ex = operator_extremes(dual.vectors, cx.theta_ladder.level(s),
                                            cx.x_ladder.level(s));
    dual.reconstruction_norms.push_back(ex.hi);
    dual.reconstruction_norm_methods.push_back(ex.method);
  }

  ModelSpec spec;
  spec.name = "coordinate";
  spec.truncation = n;
  spec.level_count = theta.level_count();
  return ModelBundle{std::move(spec), cx.x_ladder, cx.theta_ladder, cx.framed, std::move(dual),
                     {}};
}

inline ModelBundle build_coordinate_model(std::size_t n, std::size_t s_max) {
  return build_coordinate_model(lp_theta_ladder(n, s_max + 1));
}

// Dispatcher used by the runner.
inline ModelBundle build_model(const ModelSpec& spec) {
  if (spec.level_count < 2) throw std::invalid_argument("model: level_count >= 2 required");
  const std::size_t s_max = spec.level_count - 1;
  if (spec.name == "hermite") return build_hermite_model(spec.truncation, s_max);
  if (spec.name == "weighted_shift")
    return build_weighted_shift_model(spec.weights, spec.truncation, s_max);
  if (spec.name == "lp_shift_invariant") {
    std::vector<double> taps = spec.taps;
    if (taps.empty()) taps = {1.0, 0.5};
    return build_lp_shift_model(taps, spec.truncation, s_max);
  }
  if (spec.name == "coordinate") return build_coordinate_model(spec.truncation, s_max);
  throw std::invalid_argument("model: unknown name '" + spec.name + "'");
}

}  // namespace framekit
