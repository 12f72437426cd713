#pragma once

// Symmetric positive definite band matrices and their Cholesky factors.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcfk/chain_params.hpp"

namespace qcfk {

class not_positive_definite : public std::runtime_error {
 public:
  explicit not_positive_definite(std::size_t pivot)
      : std::runtime_error("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  /// One-based index of the failing pivot.
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Symmetric band matrix storing only the diagonal and `bw` sub-diagonals.
/// band(k)[j] holds A(j + k, j).
class BandedSpdMatrix {
 public:
  BandedSpdMatrix() = default;
  BandedSpdMatrix(std::size_t n, int bw) : n_(n), bw_(bw), bands_(static_cast<std::size_t>(bw) + 1) {
    for (int k = 0; k <= bw; ++k) bands_[k].assign(n > static_cast<std::size_t>(k) ? n - k : 0, 0.0);
  }

  std::size_t size() const noexcept { return n_; }
  int bandwidth() const noexcept { return bw_; }

  std::span<const double> band(int k) const { return bands_.at(k); }
  std::span<double> band(int k) { return bands_.at(k); }

  double operator()(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    const std::size_t k = i - j;
    if (k > static_cast<std::size_t>(bw_)) return 0.0;
    return bands_[k][j];
  }

  /// Adds v to A(i,j) and, implicitly, to A(j,i).
  void add(std::size_t i, std::size_t j, double v) {
    if (i < j) std::swap(i, j);
    const std::size_t k = i - j;
    assert(k <= static_cast<std::size_t>(bw_));
    bands_[k][j] += v;
  }

  void set(std::size_t i, std::size_t j, double v) {
    if (i < j) std::swap(i, j);
    const std::size_t k = i - j;
    assert(k <= static_cast<std::size_t>(bw_));
    bands_[k][j] = v;
  }

  std::vector<double> multiply(std::span<const double> x) const {
    assert(x.size() == n_);
    std::vector<double> y(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) y[j] = bands_[0][j] * x[j];
    for (int k = 1; k <= bw_; ++k) {
      const auto& b = bands_[k];
      for (std::size_t j = 0; j < b.size(); ++j) {
        y[j + k] += b[j] * x[j];
        y[j] += b[j] * x[j + k];
      }
    }
    return y;
  }

  /// Returns A - B; both operands must have the same size.
  friend BandedSpdMatrix operator-(const BandedSpdMatrix& a, const BandedSpdMatrix& b) {
    assert(a.n_ == b.n_);
    BandedSpdMatrix r(a.n_, std::max(a.bw_, b.bw_));
    for (int k = 0; k <= a.bw_; ++k)
      for (std::size_t j = 0; j < a.bands_[k].size(); ++j) r.bands_[k][j] += a.bands_[k][j];
    for (int k = 0; k <= b.bw_; ++k)
      for (std::size_t j = 0; j < b.bands_[k].size(); ++j) r.bands_[k][j] -= b.bands_[k][j];
    return r;
  }

 private:
  std::size_t n_ = 0;
  int bw_ = 0;
  std::vector<std::vector<double>> bands_;
};

/// Lower Cholesky factor L (A = L L^T) in the same band layout.
class BandedFactor {
 public:
  BandedFactor() = default;
  explicit BandedFactor(BandedSpdMatrix lower) : l_(std::move(lower)) {}

  std::size_t size() const noexcept { return l_.size(); }
  int bandwidth() const noexcept { return l_.bandwidth(); }
  const BandedSpdMatrix& lower() const noexcept { return l_; }

  std::vector<double> solve(std::span<const double> rhs) const {
    const std::size_t n = l_.size();
    const int bw = l_.bandwidth();
    assert(rhs.size() == n);
    std::vector<double> x(rhs.begin(), rhs.end());
    // L z = rhs
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];
      const std::size_t lo = i > static_cast<std::size_t>(bw) ? i - bw : 0;
      for (std::size_t j = lo; j < i; ++j) s -= l_.band(static_cast<int>(i - j))[j] * x[j];
      x[i] = s / l_.band(0)[i];
    }
    // L^T x = z
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x[ii];
      const std::size_t hi = std::min(n - 1, ii + bw);
      for (std::size_t j = ii + 1; j <= hi; ++j) s -= l_.band(static_cast<int>(j - ii))[ii] * x[j];
      x[ii] = s / l_.band(0)[ii];
    }
    return x;
  }

 private:
  BandedSpdMatrix l_;
};

inline BandedFactor factor(const BandedSpdMatrix& a) {
  const std::size_t n = a.size();
  const int bw = a.bandwidth();
  BandedSpdMatrix l(n, bw);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > static_cast<std::size_t>(bw) ? i - bw : 0;
    for (std::size_t j = lo; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = lo; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) throw not_positive_definite(i + 1);
        l.set(i, i, std::sqrt(s));
      } else {
        l.set(i, j, s / l(j, j));
      }
    }
  }
  return BandedFactor(std::move(l));
}

inline std::vector<double> solve(const BandedFactor& f, std::span<const double> rhs) { return f.solve(rhs); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// v^T A v. A meaningfully negative value means A is not SPD.
inline double quad_form(const BandedSpdMatrix& a, std::span<const double> v) {
  const double q = dot(v, a.multiply(v));
  if (q < 0.0) {
    const double scale = dot(v, v);
    if (q < -1e-12 * scale)
      throw internal_consistency_error("negative quadratic form " + std::to_string(q));
    return 0.0;
  }
  return q;
}

/// Energy norm sqrt(v^T A v).
inline double norm(const BandedSpdMatrix& a, std::span<const double> v) { return std::sqrt(quad_form(a, v)); }

}  // namespace qcfk
