#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ppgd/detail/sum.hpp"
#include "ppgd/spectral/grid.hpp"

namespace ppgd::spectral {

/// Real-valued periodic grid function sampled at the collocation points
/// x_ij = (i*h, j*h). Storage is row-major: values[i*n + j].
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(Grid grid)
      : grid_(grid), values_(static_cast<std::size_t>(grid.points()), 0.0) {}
  SpectralField(Grid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(grid_.points()))
      throw std::invalid_argument("SpectralField: value count does not match grid");
  }

  /// Sample a function f(x, y) at the collocation points.
  template <class F>
  static SpectralField sample(Grid grid, F&& f) {
    SpectralField out(grid);
    const double h = grid.spacing();
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) out(i, j) = f(i * h, j * h);
    return out;
  }

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * grid_.n + j]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * grid_.n + j]; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Grid mean (1/n^2) sum of samples, i.e. the zero Fourier mode.
  double mean() const {
    const double s = detail::pairwise_sum(values_);
    return s / static_cast<double>(values_.size());
  }

  /// Collocation quadrature of the pointwise product, h^2 sum f*g.
  /// This is the discrete L^2 pairing used for all duality products.
  double quadrature_inner(const SpectralField& other) const {
    check_same_grid(other);
    const double h = grid_.spacing();
    const double s = detail::pairwise_sum_indexed(
        0, values_.size(), [&](std::size_t k) { return values_[k] * other.values_[k]; });
    return h * h * s;
  }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  SpectralField& operator*=(double a) {
    for (double& v : values_) v *= a;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double a, SpectralField f) { return f *= a; }
  friend SpectralField operator-(SpectralField f) { return f *= -1.0; }

  void check_same_grid(const SpectralField& o) const {
    if (!(grid_ == o.grid_))
      throw std::invalid_argument("SpectralField: grid mismatch between operands");
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// y += a * x without temporaries.
inline void add_scaled(SpectralField& y, double a, const SpectralField& x) {
  y.check_same_grid(x);
  double* yd = y.data();
  const double* xd = x.data();
  for (std::size_t k = 0; k < y.size(); ++k) yd[k] += a * xd[k];
}

inline SpectralField pointwise_multiply(const SpectralField& a, const SpectralField& b) {
  a.check_same_grid(b);
  SpectralField out(a.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = a.data()[k] * b.data()[k];
  return out;
}

inline SpectralField pointwise_cube(const SpectralField& f) {
  SpectralField out(f.grid());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double v = f.data()[k];
    out.data()[k] = v * v * v;
  }
  return out;
}

/// Projection onto mean-zero fields: subtracts the grid mean. Exact and
/// idempotent, no transform involved.
inline SpectralField mean_zero_project(const SpectralField& f) {
  const double m = f.mean();
  SpectralField out = f;
  for (double& v : out.values()) v -= m;
  return out;
}

}  // namespace ppgd::spectral
