#pragma once

// Dense kernel: coefficient vectors/matrices, norm evaluation, one-sided
// Jacobi SVD, and a minimum-norm solver for affine-constrained problems.
// Everything is 64-bit floating point and deterministic for fixed inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace framekit {

// Global absolute comparison tolerance used when an operation does not state
// its own.
inline constexpr double kDefaultTol = 1e-9;

// ---------------------------------------------------------------------------
// CoeffVector / CoeffMatrix

class CoeffVector {
 public:
  CoeffVector() = default;
  explicit CoeffVector(std::size_t n) : e_(n, 0.0) {}
  CoeffVector(std::initializer_list<double> xs) : e_(xs) {}
  explicit CoeffVector(std::vector<double> xs) : e_(std::move(xs)) {}

  std::size_t size() const { return e_.size(); }
  bool empty() const { return e_.empty(); }
  double& operator[](std::size_t i) { return e_[i]; }
  double operator[](std::size_t i) const { return e_[i]; }
  const std::vector<double>& entries() const { return e_; }
  std::vector<double>& entries() { return e_; }

  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }

  bool all_finite() const {
    for (double x : e_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  static CoeffVector unit(std::size_t n, std::size_t i) {
    CoeffVector v(n);
    v[i] = 1.0;
    return v;
  }

  // First n entries kept, the rest zeroed; models the partial sum c_1..c_n.
  CoeffVector prefix(std::size_t n) const {
    CoeffVector out(size());
    for (std::size_t i = 0; i < std::min(n, size()); ++i) out[i] = e_[i];
    return out;
  }

  // Entries 1..n zeroed, tail kept; the paper-style tail c^(n).
  CoeffVector tail_from(std::size_t n) const {
    CoeffVector out(size());
    for (std::size_t i = n; i < size(); ++i) out[i] = e_[i];
    return out;
  }

 private:
  std::vector<double> e_;
};

inline double dot(const CoeffVector& a, const CoeffVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2(const CoeffVector& v) { return std::sqrt(std::max(0.0, dot(v, v))); }

inline CoeffVector operator+(const CoeffVector& a, const CoeffVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector add: dimension mismatch");
  CoeffVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline CoeffVector operator-(const CoeffVector& a, const CoeffVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sub: dimension mismatch");
  CoeffVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline CoeffVector operator*(double t, const CoeffVector& a) {
  CoeffVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

// Row-major dense matrix.
class CoeffMatrix {
 public:
  CoeffMatrix() = default;
  CoeffMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix: empty shape");
  }

  static CoeffMatrix identity(std::size_t n) {
    CoeffMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CoeffMatrix from_rows(const std::vector<CoeffVector>& rows) {
    if (rows.empty()) throw std::invalid_argument("from_rows: no rows");
    CoeffMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("from_rows: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  const std::vector<double>& entries() const { return e_; }

  bool all_finite() const {
    for (double x : e_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  CoeffVector row(std::size_t i) const {
    CoeffVector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }

  CoeffVector col(std::size_t j) const {
    CoeffVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  CoeffMatrix transposed() const {
    CoeffMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  CoeffVector mul(const CoeffVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matvec: dimension mismatch");
    CoeffVector r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  CoeffVector tmul(const CoeffVector& v) const {
    if (v.size() != rows_) throw std::invalid_argument("tmatvec: dimension mismatch");
    CoeffVector r(cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[j] += (*this)(i, j) * v[i];
    return r;
  }

  CoeffMatrix mul(const CoeffMatrix& b) const {
    if (cols_ != b.rows_) throw std::invalid_argument("matmul: dimension mismatch");
    CoeffMatrix r(rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> e_;
};

// ---------------------------------------------------------------------------
// Deterministic pseudo-randomness. Distributions are hand-rolled so streams
// are identical across standard libraries.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // xorshift* variant
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double symmetric() { return 2.0 * uniform() - 1.0; }

  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  CoeffVector gaussian(std::size_t n) {
    CoeffVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// NormSpec: closed-form norms on coefficient vectors.
//
//   Lp(p)                (sum |v_i|^p)^(1/p), p in (1, inf)
//   WeightedL2(w)        sqrt(sum (w_i v_i)^2), w_i >= 1
//   Sup                  max |v_i|
//   MatrixInduced(A, n)  n(A v) for an inner spec n (default l2)
//   ShiftTilde(w)        sqrt(w_1^2 max(|v_1|,|v_2|)^2 + sum_{k>=2} w_k^2 v_{k+1}^2)
//                        (the minimal-norm value of the shift-pattern constraint
//                        set; used by the constructed solid sequence ladders)
//   SynthesisSup(F, n)   max over prefixes m of n(sum_{i<=m} v_i F.col(i))
//
// Every spec carries a positive scalar `scale` multiplying the base value, so
// rescaled norms stay closed-form.

enum class NormKind { Lp, WeightedL2, Sup, MatrixInduced, ShiftTilde, SynthesisSup };

class NormSpec {
 public:
  static NormSpec lp(double p) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw std::invalid_argument("NormSpec: Lp requires p in (1, inf)");
    NormSpec s(NormKind::Lp);
    s.p_ = p;
    return s;
  }

  static NormSpec l2() { return lp(2.0); }

  static NormSpec weighted_l2(CoeffVector w) {
    for (double x : w)
      if (!(x >= 1.0 - 1e-12) || !std::isfinite(x))
        throw std::invalid_argument("NormSpec: WeightedL2 weights must be >= 1");
    NormSpec s(NormKind::WeightedL2);
    s.weights_ = std::move(w);
    return s;
  }

  static NormSpec sup() { return NormSpec(NormKind::Sup); }

  static NormSpec matrix_induced(CoeffMatrix a, NormSpec inner = l2()) {
    if (!a.all_finite()) throw std::invalid_argument("NormSpec: non-finite matrix");
    NormSpec s(NormKind::MatrixInduced);
    s.matrix_ = std::move(a);
    s.inner_ = std::make_shared<NormSpec>(std::move(inner));
    return s;
  }

  static NormSpec shift_tilde(CoeffVector w) {
    for (double x : w)
      if (!(x >= 1.0 - 1e-12) || !std::isfinite(x))
        throw std::invalid_argument("NormSpec: ShiftTilde weights must be >= 1");
    if (w.empty()) throw std::invalid_argument("NormSpec: ShiftTilde needs weights");
    NormSpec s(NormKind::ShiftTilde);
    s.weights_ = std::move(w);
    return s;
  }

  static NormSpec synthesis_sup(CoeffMatrix columns, NormSpec inner) {
    if (!columns.all_finite()) throw std::invalid_argument("NormSpec: non-finite matrix");
    NormSpec s(NormKind::SynthesisSup);
    s.matrix_ = std::move(columns);
    s.inner_ = std::make_shared<NormSpec>(std::move(inner));
    return s;
  }

  NormSpec scaled(double t) const {
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("NormSpec: scale must be positive");
    NormSpec s = *this;
    s.scale_ *= t;
    return s;
  }

  NormKind kind() const { return kind_; }
  double p() const { return p_; }
  double scale() const { return scale_; }
  const CoeffVector& weights() const { return weights_; }
  const CoeffMatrix& matrix() const { return matrix_; }
  const NormSpec& inner() const { return *inner_; }

  // Expected input dimension; 0 means any.
  std::size_t dim() const {
    switch (kind_) {
      case NormKind::Lp:
      case NormKind::Sup:
        return 0;
      case NormKind::WeightedL2:
        return weights_.size();
      case NormKind::MatrixInduced:
        return matrix_.cols();
      case NormKind::ShiftTilde:
        return weights_.size() + 1;
      case NormKind::SynthesisSup:
        return matrix_.cols();
    }
    return 0;
  }

 private:
  explicit NormSpec(NormKind k) : kind_(k) {}

  NormKind kind_;
  double p_ = 2.0;
  double scale_ = 1.0;
  CoeffVector weights_;
  CoeffMatrix matrix_;
  std::shared_ptr<const NormSpec> inner_;
};

namespace detail {

inline void check_norm_input(const CoeffVector& v, const NormSpec& spec) {
  if (!v.all_finite()) throw std::invalid_argument("norm: non-finite entries");
  if (spec.dim() != 0 && spec.dim() != v.size())
    throw std::invalid_argument("norm: dimension mismatch with norm parameters");
}

}  // namespace detail

inline double norm(const CoeffVector& v, const NormSpec& spec) {
  detail::check_norm_input(v, spec);
  if (v.empty()) return 0.0;
  switch (spec.kind()) {
    case NormKind::Lp: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      if (m == 0.0) return 0.0;
      double acc = 0.0;
      for (double x : v) acc += std::pow(std::abs(x) / m, spec.p());
      return spec.scale() * m * std::pow(acc, 1.0 / spec.p());
    }
    case NormKind::WeightedL2: {
      double acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = spec.weights()[i] * v[i];
        acc += t * t;
      }
      return spec.scale() * std::sqrt(acc);
    }
    case NormKind::Sup: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return spec.scale() * m;
    }
    case NormKind::MatrixInduced:
      return spec.scale() * norm(spec.matrix().mul(v), spec.inner());
    case NormKind::ShiftTilde: {
      const CoeffVector& w = spec.weights();
      const double head = std::max(std::abs(v[0]), std::abs(v[1]));
      double acc = w[0] * head * (w[0] * head);
      for (std::size_t k = 1; k < w.size(); ++k) {
        const double t = w[k] * v[k + 1];
        acc += t * t;
      }
      return spec.scale() * std::sqrt(acc);
    }
    case NormKind::SynthesisSup: {
      const CoeffMatrix& f = spec.matrix();
      CoeffVector y(f.rows());
      double best = 0.0;
      for (std::size_t n = 0; n < f.cols(); ++n) {
        for (std::size_t i = 0; i < f.rows(); ++i) y[i] += v[n] * f(i, n);
        best = std::max(best, norm(y, spec.inner()));
      }
      return spec.scale() * best;
    }
  }
  return 0.0;
}

// Subgradient of the norm; zero vector at the origin. Used by the sampled
// frame-bound optimizer, so ties may resolve to any valid subgradient.
inline CoeffVector norm_gradient(const CoeffVector& v, const NormSpec& spec) {
  detail::check_norm_input(v, spec);
  CoeffVector g(v.size());
  const double base = norm(v, spec) / spec.scale();
  if (base <= 0.0) return g;
  switch (spec.kind()) {
    case NormKind::Lp: {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        const double t = std::pow(std::abs(v[i]) / base, spec.p() - 1.0);
        g[i] = spec.scale() * (v[i] > 0 ? t : -t);
      }
      return g;
    }
    case NormKind::WeightedL2: {
      for (std::size_t i = 0; i < v.size(); ++i)
        g[i] = spec.scale() * spec.weights()[i] * spec.weights()[i] * v[i] / base;
      return g;
    }
    case NormKind::Sup: {
      std::size_t arg = 0;
      double m = -1.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > m) {
          m = std::abs(v[i]);
          arg = i;
        }
      g[arg] = spec.scale() * (v[arg] >= 0 ? 1.0 : -1.0);
      return g;
    }
    case NormKind::MatrixInduced: {
      CoeffVector inner_g = norm_gradient(spec.matrix().mul(v), spec.inner());
      CoeffVector out = spec.matrix().tmul(inner_g);
      return spec.scale() * out;
    }
    case NormKind::ShiftTilde: {
      const CoeffVector& w = spec.weights();
      const bool first = std::abs(v[0]) >= std::abs(v[1]);
      const std::size_t h = first ? 0 : 1;
      g[h] = spec.scale() * w[0] * w[0] * v[h] / base;
      for (std::size_t k = 1; k < w.size(); ++k)
        g[k + 1] = spec.scale() * w[k] * w[k] * v[k + 1] / base;
      return g;
    }
    case NormKind::SynthesisSup: {
      const CoeffMatrix& f = spec.matrix();
      CoeffVector y(f.rows());
      double best = -1.0;
      std::size_t best_n = 0;
      CoeffVector best_y(f.rows());
      for (std::size_t n = 0; n < f.cols(); ++n) {
        for (std::size_t i = 0; i < f.rows(); ++i) y[i] += v[n] * f(i, n);
        const double val = norm(y, spec.inner());
        if (val > best) {
          best = val;
          best_n = n;
          best_y = y;
        }
      }
      CoeffVector inner_g = norm_gradient(best_y, spec.inner());
      for (std::size_t n = 0; n <= best_n; ++n) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.rows(); ++i) s += f(i, n) * inner_g[i];
        g[n] = spec.scale() * s;
      }
      return g;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// SVD (one-sided Jacobi), pseudo-inverse, rank.

struct SvdResult {
  CoeffMatrix u;      // m x k, orthonormal columns
  CoeffVector sigma;  // k, descending, k = min(m, n)
  CoeffMatrix v;      // n x k, orthonormal columns
};

namespace detail {

// One-sided Jacobi on an m x n matrix with m >= n.
inline SvdResult jacobi_svd_tall(const CoeffMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  CoeffMatrix b = a;
  CoeffMatrix v = CoeffMatrix::identity(n);

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += b(i, p) * b(i, p);
          beta += b(i, q) * b(i, q);
          gamma += b(i, p) * b(i, q);
        }
        if (std::abs(gamma) <= 1e-32 + 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double bp = b(i, p), bq = b(i, q);
          b(i, p) = c * bp - s * bq;
          b(i, q) = s * bp + c * bq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  CoeffVector sigma(n);
  CoeffMatrix u(m, n);
  double sig_max = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += b(i, j) * b(i, j);
    sigma[j] = std::sqrt(s);
    sig_max = std::max(sig_max, sigma[j]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma[j] > sig_max * 1e-300 && sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) = b(i, j) / sigma[j];
    } else {
      sigma[j] = 0.0;
      // complete with a canonical direction orthogonal to existing columns
      for (std::size_t cand = 0; cand < m; ++cand) {
        CoeffVector e = CoeffVector::unit(m, cand);
        for (std::size_t k = 0; k < n; ++k) {
          double proj = 0.0;
          for (std::size_t i = 0; i < m; ++i) proj += u(i, k) * e[i];
          for (std::size_t i = 0; i < m; ++i) e[i] -= proj * u(i, k);
        }
        const double len = l2(e);
        if (len > 1e-6) {
          for (std::size_t i = 0; i < m; ++i) u(i, j) = e[i] / len;
          break;
        }
      }
    }
  }

  // sort descending, stable
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });
  SvdResult r{CoeffMatrix(m, n), CoeffVector(n), CoeffMatrix(v.rows(), n)};
  for (std::size_t j = 0; j < n; ++j) {
    r.sigma[j] = sigma[order[j]];
    for (std::size_t i = 0; i < m; ++i) r.u(i, j) = u(i, order[j]);
    for (std::size_t i = 0; i < v.rows(); ++i) r.v(i, j) = v(i, order[j]);
  }
  return r;
}

}  // namespace detail

inline SvdResult svd(const CoeffMatrix& a) {
  if (!a.all_finite()) throw std::invalid_argument("svd: non-finite entries");
  if (a.rows() >= a.cols()) return detail::jacobi_svd_tall(a);
  SvdResult t = detail::jacobi_svd_tall(a.transposed());
  return SvdResult{std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

inline std::size_t rank_of(const CoeffMatrix& a, double rtol = 1e-12) {
  SvdResult s = svd(a);
  const double cutoff = rtol * std::max(1.0, s.sigma.empty() ? 0.0 : s.sigma[0]);
  std::size_t r = 0;
  for (double x : s.sigma)
    if (x > cutoff) ++r;
  return r;
}

inline CoeffMatrix pseudo_inverse(const CoeffMatrix& a, double rtol = 1e-12) {
  SvdResult s = svd(a);
  const double cutoff = rtol * std::max(1.0, s.sigma.empty() ? 0.0 : s.sigma[0]);
  const std::size_t k = s.sigma.size();
  CoeffMatrix r(a.cols(), a.rows());
  for (std::size_t j = 0; j < k; ++j) {
    if (s.sigma[j] <= cutoff) continue;
    const double inv = 1.0 / s.sigma[j];
    for (std::size_t i = 0; i < a.cols(); ++i)
      for (std::size_t l = 0; l < a.rows(); ++l)
        r(i, l) += s.v(i, j) * inv * s.u(l, j);
  }
  return r;
}

// Quadratic factor G with norm(v) = |G v|_2, when the spec admits one.
inline std::optional<CoeffMatrix> l2_factor(const NormSpec& spec, std::size_t dim) {
  switch (spec.kind()) {
    case NormKind::Lp: {
      if (spec.p() != 2.0) return std::nullopt;
      CoeffMatrix g(dim, dim);
      for (std::size_t i = 0; i < dim; ++i) g(i, i) = spec.scale();
      return g;
    }
    case NormKind::WeightedL2: {
      if (spec.weights().size() != dim) return std::nullopt;
      CoeffMatrix g(dim, dim);
      for (std::size_t i = 0; i < dim; ++i) g(i, i) = spec.scale() * spec.weights()[i];
      return g;
    }
    case NormKind::MatrixInduced: {
      if (spec.matrix().cols() != dim) return std::nullopt;
      auto inner = l2_factor(spec.inner(), spec.matrix().rows());
      if (!inner) return std::nullopt;
      CoeffMatrix g = inner->mul(spec.matrix());
      if (spec.scale() != 1.0) {
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= spec.scale();
      }
      return g;
    }
    default:
      return std::nullopt;
  }
}

// Dual norm of the functional v^T . under the given level norm. Exact for the
// kinds used on the space side of the shipped models.
inline double dual_norm(const CoeffVector& v, const NormSpec& spec) {
  detail::check_norm_input(v, spec);
  switch (spec.kind()) {
    case NormKind::Lp: {
      const double q = spec.p() / (spec.p() - 1.0);
      return norm(v, NormSpec::lp(q)) / spec.scale();
    }
    case NormKind::WeightedL2: {
      double acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = v[i] / spec.weights()[i];
        acc += t * t;
      }
      return std::sqrt(acc) / spec.scale();
    }
    case NormKind::Sup: {
      double acc = 0.0;
      for (double x : v) acc += std::abs(x);
      return acc / spec.scale();
    }
    case NormKind::MatrixInduced: {
      // sup v.f / inner(A f); exact when A is square and invertible, which is
      // how induced norms occur on the space side of the shipped models.
      const CoeffMatrix& a = spec.matrix();
      if (rank_of(a) < a.cols())
        throw std::invalid_argument("dual_norm: induced norm matrix is rank deficient");
      CoeffVector w = pseudo_inverse(a).transposed().mul(v);
      return dual_norm(w, spec.inner()) / spec.scale();
    }
    default:
      throw std::invalid_argument("dual_norm: unsupported norm kind");
  }
}

// ---------------------------------------------------------------------------
// Minimum-norm solve: minimize a WeightedL2 / l2-factorable norm over an
// affine feasible region. Inequalities are a.f >= b. Deterministic
// active-set method on the dual bound problem; infeasibility is detected via
// an unbounded dual ray and reported distinctly from non-convergence.

struct LinearConstraint {
  CoeffVector normal;
  double offset = 0.0;
  bool equality = false;
};

enum class SolveStatus { Optimal, Infeasible, NoConvergence };

struct LeastNormResult {
  SolveStatus status = SolveStatus::NoConvergence;
  CoeffVector minimizer;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::size_t iterations = 0;
};

namespace detail {

// Plain Cholesky solve of a symmetric positive-definite system; returns false
// when a pivot collapses (semi-definite gram), in which case callers fall
// back to the least-squares path.
inline bool cholesky_solve(const CoeffMatrix& g, const CoeffVector& q, CoeffVector& out) {
  const std::size_t n = g.rows();
  CoeffMatrix l(n, n);
  double diag_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) diag_max = std::max(diag_max, g(i, i));
  const double tol = 1e-12 * std::max(1.0, diag_max);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= tol) return false;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  CoeffVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = q[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  out = CoeffVector(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * out[k];
    out[ii] = s / l(ii, ii);
  }
  return true;
}

// min |y| s.t. n_i.y >= b_i (or == for equality rows). Returns y through out.
inline SolveStatus min_norm_core(const std::vector<CoeffVector>& normals,
                                 const std::vector<double>& offsets,
                                 const std::vector<bool>& is_eq, std::size_t dim,
                                 CoeffVector& out, std::size_t& iters_used) {
  const std::size_t m = normals.size();
  out = CoeffVector(dim);
  if (m == 0) return SolveStatus::Optimal;

  double bscale = 1.0;
  for (double b : offsets) bscale = std::max(bscale, std::abs(b));
  const double feas_tol = 1e-10 * bscale;
  const double mult_tol = 1e-11 * bscale;

  std::vector<double> lambda(m, 0.0);
  std::vector<bool> free_set(m, false);
  for (std::size_t i = 0; i < m; ++i) free_set[i] = is_eq[i];

  CoeffMatrix full_gram(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b)
      full_gram(a, b) = full_gram(b, a) = dot(normals[a], normals[b]);
  auto gram = [&](const std::vector<std::size_t>& idx) {
    CoeffMatrix g(std::max<std::size_t>(idx.size(), 1), std::max<std::size_t>(idx.size(), 1));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) g(a, b) = full_gram(idx[a], idx[b]);
    return g;
  };

  auto current_u = [&]() {
    CoeffVector u(dim);
    for (std::size_t i = 0; i < m; ++i)
      if (lambda[i] != 0.0)
        for (std::size_t j = 0; j < dim; ++j) u[j] += lambda[i] * normals[i][j];
    return u;
  };

  const std::size_t max_iters = 120 + 30 * m;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    iters_used = iter + 1;
    std::vector<std::size_t> f_idx;
    for (std::size_t i = 0; i < m; ++i)
      if (free_set[i]) f_idx.push_back(i);

    if (!f_idx.empty()) {
      CoeffMatrix g = gram(f_idx);
      CoeffVector q(f_idx.size());
      for (std::size_t a = 0; a < f_idx.size(); ++a) q[a] = offsets[f_idx[a]];
      CoeffVector cand;
      bool direct = cholesky_solve(g, q, cand);
      if (direct && l2(q - g.mul(cand)) > 1e-9 * (1.0 + l2(q))) direct = false;
      if (!direct) cand = pseudo_inverse(g, 1e-12).mul(q);  // semi-definite or ill conditioned
      CoeffVector resid = q - g.mul(cand);

      if (l2(resid) > 1e-9 * (1.0 + l2(q))) {
        // q has a component outside R(G): dual objective is unbounded along
        // resid unless a bound blocks. No blocking bound => primal infeasible.
        double step = std::numeric_limits<double>::infinity();
        std::size_t blocker = m;
        for (std::size_t a = 0; a < f_idx.size(); ++a) {
          const std::size_t i = f_idx[a];
          if (is_eq[i] || resid[a] >= -1e-14) continue;
          const double t = lambda[i] / (-resid[a]);
          if (t < step) {
            step = t;
            blocker = i;
          }
        }
        if (blocker == m) return SolveStatus::Infeasible;
        for (std::size_t a = 0; a < f_idx.size(); ++a) lambda[f_idx[a]] += step * resid[a];
        lambda[blocker] = 0.0;
        free_set[blocker] = false;
        continue;
      }

      // feasibility of candidate multipliers on inequality rows
      double worst = 0.0;
      for (std::size_t a = 0; a < f_idx.size(); ++a) {
        const std::size_t i = f_idx[a];
        if (!is_eq[i]) worst = std::min(worst, cand[a]);
      }
      if (worst < -mult_tol) {
        // partial step towards cand, drop the first blocking bound
        double step = 1.0;
        std::size_t blocker = m;
        for (std::size_t a = 0; a < f_idx.size(); ++a) {
          const std::size_t i = f_idx[a];
          if (is_eq[i] || cand[a] >= lambda[i]) continue;
          const double denom = lambda[i] - cand[a];
          if (denom <= 0.0) continue;
          const double t = lambda[i] / denom;
          if (t < step) {
            step = t;
            blocker = i;
          }
        }
        for (std::size_t a = 0; a < f_idx.size(); ++a) {
          const std::size_t i = f_idx[a];
          lambda[i] += step * (cand[a] - lambda[i]);
        }
        if (blocker != m) {
          lambda[blocker] = 0.0;
          free_set[blocker] = false;
        }
        continue;
      }
      for (std::size_t a = 0; a < f_idx.size(); ++a)
        lambda[f_idx[a]] = is_eq[f_idx[a]] ? cand[a] : std::max(cand[a], 0.0);
    }

    // KKT: all constraints satisfied at u?
    CoeffVector u = current_u();
    double worst_slack = 0.0;
    std::size_t worst_i = m;
    for (std::size_t i = 0; i < m; ++i) {
      const double slack = dot(normals[i], u) - offsets[i];
      const double viol = is_eq[i] ? std::abs(slack) : -slack;
      if (viol > worst_slack) {
        worst_slack = viol;
        worst_i = i;
      }
    }
    if (worst_i == m || worst_slack <= feas_tol) {
      out = u;
      return SolveStatus::Optimal;
    }
    if (free_set[worst_i]) {
      // already free yet violated beyond tolerance: numerical stall
      return SolveStatus::NoConvergence;
    }
    free_set[worst_i] = true;
  }
  return SolveStatus::NoConvergence;
}

}  // namespace detail

inline LeastNormResult least_norm_solve(std::span<const LinearConstraint> constraints,
                                        const NormSpec& objective, std::size_t dim) {
  auto factor = l2_factor(objective, dim);
  if (!factor)
    throw std::invalid_argument("least_norm_solve: objective must be WeightedL2 or l2-factorable");
  for (const auto& c : constraints) {
    if (c.normal.size() != dim)
      throw std::invalid_argument("least_norm_solve: constraint dimension mismatch");
    if (!c.normal.all_finite() || !std::isfinite(c.offset))
      throw std::invalid_argument("least_norm_solve: non-finite constraint");
  }

  // substitute y with f = B y so the objective becomes |y|
  CoeffMatrix back(dim, dim);
  bool diagonal = factor->rows() == dim;
  for (std::size_t i = 0; diagonal && i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (i != j && (*factor)(i, j) != 0.0) diagonal = false;
  if (diagonal) {
    double dmax = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dmax = std::max(dmax, std::abs((*factor)(i, i)));
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = (*factor)(i, i);
      if (std::abs(d) <= 1e-12 * std::max(1.0, dmax))
        throw std::invalid_argument("least_norm_solve: degenerate objective norm");
      back(i, i) = 1.0 / d;
    }
  } else {
    SvdResult gs = svd(*factor);
    if (gs.sigma[gs.sigma.size() - 1] <= 1e-12 * std::max(1.0, gs.sigma[0]))
      throw std::invalid_argument("least_norm_solve: degenerate objective norm");
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) back(i, j) = gs.v(i, j) / gs.sigma[j];
  }

  std::vector<CoeffVector> normals;
  std::vector<double> offsets;
  std::vector<bool> is_eq;
  normals.reserve(constraints.size());
  for (const auto& c : constraints) {
    normals.push_back(back.tmul(c.normal));
    offsets.push_back(c.offset);
    is_eq.push_back(c.equality);
  }

  LeastNormResult r;
  CoeffVector y;
  r.status = detail::min_norm_core(normals, offsets, is_eq, dim, y, r.iterations);
  if (r.status != SolveStatus::Optimal) return r;
  r.minimizer = back.mul(y);
  r.value = norm(r.minimizer, objective);
  return r;
}

}  // namespace framekit
