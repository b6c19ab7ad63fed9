#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "ppgd/spectral/field.hpp"
#include "ppgd/spectral/grid.hpp"

namespace ppgd::spectral {

/// Fourier coefficients of a real field in half-complex layout: full range
/// of modes in the first index, modes 0..n/2 in the second. Normalized so
/// that f(x) = sum_k c_k exp(i k.x), i.e. c_0 is the mean.
struct Coefficients {
  Grid grid;
  std::vector<std::complex<double>> c;

  Coefficients() = default;
  explicit Coefficients(Grid g)
      : grid(g), c(static_cast<std::size_t>(g.n) * (g.n / 2 + 1), {0.0, 0.0}) {}

  int cols() const { return grid.n / 2 + 1; }
  std::complex<double>& at(int i, int j) { return c[static_cast<std::size_t>(i) * cols() + j]; }
  const std::complex<double>& at(int i, int j) const {
    return c[static_cast<std::size_t>(i) * cols() + j];
  }
};

/// Signed integer mode for row/column index i on an n-point grid.
inline int mode_of(int i, int n) { return i <= n / 2 ? i : i - n; }

/// Owns the FFTW plans and work buffers for one grid, plus the running
/// count of executed transforms. A context is meant to be owned by one
/// solve at a time; concurrent solves each build their own.
class TransformContext {
 public:
  explicit TransformContext(Grid grid) : grid_(grid) {
    plan_ = make_plans(grid_.n);
  }

  TransformContext(const TransformContext&) = delete;
  TransformContext& operator=(const TransformContext&) = delete;

  const Grid& grid() const { return grid_; }

  /// Number of forward + inverse transforms executed so far.
  long fft_count() const { return count_; }

  Coefficients forward(const SpectralField& f) {
    Coefficients out(grid_);
    forward_into(f, out);
    return out;
  }

  void forward_into(const SpectralField& f, Coefficients& out) {
    if (!(f.grid() == grid_))
      throw std::invalid_argument("TransformContext: field grid does not match context");
    if (out.grid.n != grid_.n) out = Coefficients(grid_);
    execute_forward(*plan_, f.data(), out.c.data());
    ++count_;
  }

  SpectralField inverse(const Coefficients& c) {
    SpectralField out(grid_);
    inverse_into(c, out);
    return out;
  }

  void inverse_into(const Coefficients& c, SpectralField& out) {
    if (!(c.grid == grid_))
      throw std::invalid_argument("TransformContext: coefficient grid does not match context");
    if (!(out.grid() == grid_)) out = SpectralField(grid_);
    execute_inverse(*plan_, c.c.data(), out.data());
    ++count_;
  }

  /// Padded-grid transforms for the three-halves product rule. The padded
  /// grid has m = 3n/2 points per dimension; plans are created on first use.
  int padded_n() const { return 3 * grid_.n / 2; }

  std::vector<double> padded_physical(const Coefficients& c) {
    ensure_padded_plans();
    const int n = grid_.n, m = padded_n();
    std::vector<std::complex<double>> pc(static_cast<std::size_t>(m) * (m / 2 + 1), {0.0, 0.0});
    // Copy modes |k| < n/2 into the padded layout; Nyquist rows/columns are
    // dropped (their split representation is not needed for smooth data).
    for (int i = 0; i < n; ++i) {
      const int ki = mode_of(i, n);
      if (ki == n / 2) continue;
      const int ip = ki >= 0 ? ki : ki + m;
      for (int j = 0; j < n / 2; ++j)
        pc[static_cast<std::size_t>(ip) * (m / 2 + 1) + j] = c.at(i, j);
    }
    std::vector<double> out(static_cast<std::size_t>(m) * m);
    execute_inverse(*padded_plan_, pc.data(), out.data());
    ++count_;
    return out;
  }

  Coefficients truncate_from_padded(const std::vector<double>& padded_values) {
    ensure_padded_plans();
    const int n = grid_.n, m = padded_n();
    std::vector<std::complex<double>> pc(static_cast<std::size_t>(m) * (m / 2 + 1));
    execute_forward(*padded_plan_, padded_values.data(), pc.data());
    ++count_;
    Coefficients out(grid_);
    for (int i = 0; i < n; ++i) {
      const int ki = mode_of(i, n);
      if (ki == n / 2) continue;
      const int ip = ki >= 0 ? ki : ki + m;
      for (int j = 0; j < n / 2; ++j)
        out.at(i, j) = pc[static_cast<std::size_t>(ip) * (m / 2 + 1) + j];
    }
    return out;
  }

 private:
  struct Plans {
    int n = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Plans(int n_) : n(n_) {
      real = fftw_alloc_real(static_cast<std::size_t>(n) * n);
      cplx = fftw_alloc_complex(static_cast<std::size_t>(n) * (n / 2 + 1));
      // The FFTW planner is not thread-safe; serialize plan creation.
      std::lock_guard<std::mutex> lock(planner_mutex());
      fwd = fftw_plan_dft_r2c_2d(n, n, real, cplx, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_2d(n, n, cplx, real, FFTW_ESTIMATE);
      if (!fwd || !bwd) throw std::runtime_error("TransformContext: FFTW planning failed");
    }
    ~Plans() {
      std::lock_guard<std::mutex> lock(planner_mutex());
      if (fwd) fftw_destroy_plan(fwd);
      if (bwd) fftw_destroy_plan(bwd);
      fftw_free(real);
      fftw_free(cplx);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
  };

  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  static std::unique_ptr<Plans> make_plans(int n) { return std::make_unique<Plans>(n); }

  void ensure_padded_plans() {
    if (!padded_plan_) padded_plan_ = make_plans(padded_n());
  }

  static void execute_forward(Plans& p, const double* in, std::complex<double>* out) {
    const std::size_t nn = static_cast<std::size_t>(p.n) * p.n;
    const std::size_t nc = static_cast<std::size_t>(p.n) * (p.n / 2 + 1);
    std::copy(in, in + nn, p.real);
    fftw_execute(p.fwd);
    const double scale = 1.0 / static_cast<double>(nn);
    for (std::size_t k = 0; k < nc; ++k)
      out[k] = std::complex<double>(p.cplx[k][0] * scale, p.cplx[k][1] * scale);
  }

  static void execute_inverse(Plans& p, const std::complex<double>* in, double* out) {
    const std::size_t nn = static_cast<std::size_t>(p.n) * p.n;
    const std::size_t nc = static_cast<std::size_t>(p.n) * (p.n / 2 + 1);
    for (std::size_t k = 0; k < nc; ++k) {
      p.cplx[k][0] = in[k].real();
      p.cplx[k][1] = in[k].imag();
    }
    fftw_execute(p.bwd);  // unnormalized; forward already divided by n^2
    std::copy(p.real, p.real + nn, out);
  }

  Grid grid_;
  std::unique_ptr<Plans> plan_;
  std::unique_ptr<Plans> padded_plan_;
  long count_ = 0;
};

}  // namespace ppgd::spectral
