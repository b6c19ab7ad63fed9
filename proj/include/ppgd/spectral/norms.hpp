#pragma once

#include <cmath>
#include <numbers>

#include "ppgd/detail/sum.hpp"
#include "ppgd/spectral/symbols.hpp"
#include "ppgd/spectral/transform.hpp"

namespace ppgd::spectral {

// Coefficient-space reductions. The half-complex layout stores modes
// (kx, ky) with ky in 0..n/2; columns 0 < ky < n/2 represent a conjugate
// pair and carry weight 2 in Parseval sums.

namespace detail_norms {
inline double column_weight(int j, int n) { return (j == 0 || j == n / 2) ? 1.0 : 2.0; }

template <class Term>
double weighted_sum(const Coefficients& a, Term&& term) {
  const int n = a.grid.n, cols = n / 2 + 1;
  const double area = a.grid.length * a.grid.length;
  return area * ppgd::detail::pairwise_sum_indexed(
                    0, static_cast<std::size_t>(n) * cols, [&](std::size_t idx) {
                      const int i = static_cast<int>(idx) / cols;
                      const int j = static_cast<int>(idx) % cols;
                      return column_weight(j, n) * term(i, j, idx);
                    });
}
}  // namespace detail_norms

/// ||f||_{L^2}^2 by Parseval.
inline double l2_norm_sq(const Coefficients& a) {
  return detail_norms::weighted_sum(
      a, [&](int, int, std::size_t idx) { return std::norm(a.c[idx]); });
}

/// |f|_{H1}^2 = sum |k|^2 |f_k|^2 with the effective wavenumbers, matching
/// the quadrature of |grad f|^2 exactly.
inline double h1_seminorm_sq(const Coefficients& a) {
  return detail_norms::weighted_sum(a, [&](int i, int j, std::size_t idx) {
    return effective_k2(a.grid, i, j) * std::norm(a.c[idx]);
  });
}

/// ||f||_{H^-1}^2 = sum |f_k|^2 / |k|^2 over the differencing band; the
/// mean and the Nyquist residue carry no dual mass.
inline double hminus1_norm_sq(const Coefficients& a) {
  return detail_norms::weighted_sum(a, [&](int i, int j, std::size_t idx) {
    const double k2 = effective_k2(a.grid, i, j);
    if (k2 == 0.0) return 0.0;
    return std::norm(a.c[idx]) / k2;
  });
}

/// sum m(k) |f_k|^2 for a symbol m; used for the preconditioner norms.
inline double symbol_weighted_sq(const Coefficients& a, const FourierSymbol& s) {
  return detail_norms::weighted_sum(a, [&](int, int, std::size_t idx) {
    return s.m[idx] * std::norm(a.c[idx]);
  });
}

/// sum |f_k|^2 / m(k) over the modes where the symbol acts.
inline double inv_symbol_weighted_sq(const Coefficients& a, const FourierSymbol& s) {
  return detail_norms::weighted_sum(a, [&](int, int, std::size_t idx) {
    if (s.m[idx] == 0.0) return 0.0;
    return std::norm(a.c[idx]) / s.m[idx];
  });
}

/// Parseval form of the L^2 pairing (both arguments real fields).
inline double pairing_parseval(const Coefficients& a, const Coefficients& b) {
  return detail_norms::weighted_sum(a, [&](int, int, std::size_t idx) {
    return a.c[idx].real() * b.c[idx].real() + a.c[idx].imag() * b.c[idx].imag();
  });
}

// Field-level wrappers (each costs one forward transform).

inline double l2_norm(TransformContext& ctx, const SpectralField& f) {
  return std::sqrt(l2_norm_sq(ctx.forward(f)));
}

inline double h1_seminorm(TransformContext& ctx, const SpectralField& f) {
  return std::sqrt(h1_seminorm_sq(ctx.forward(f)));
}

inline double hminus1_norm(TransformContext& ctx, const SpectralField& f) {
  return std::sqrt(hminus1_norm_sq(ctx.forward(f)));
}

/// ||v||_L with L = lambda (-Lap)^{-1} + gamma - Lap (mean-zero data).
inline double precond_norm(TransformContext& ctx, const SpectralField& f, double lambda,
                           double gamma) {
  return std::sqrt(symbol_weighted_sq(ctx.forward(f), precond_symbol(ctx.grid(), lambda, gamma)));
}

inline double precond_dual_norm(TransformContext& ctx, const SpectralField& f, double lambda,
                                double gamma) {
  return std::sqrt(
      inv_symbol_weighted_sq(ctx.forward(f), precond_symbol(ctx.grid(), lambda, gamma)));
}

/// ||f||_{L^4}^4 by collocation quadrature.
inline double l4_norm_pow4(const SpectralField& f) {
  const double h = f.grid().spacing();
  const double s = ppgd::detail::pairwise_sum_indexed(0, f.size(), [&](std::size_t k) {
    const double v = f.data()[k];
    const double v2 = v * v;
    return v2 * v2;
  });
  return h * h * s;
}

/// Sharp Poincare constant for mean-zero periodic functions on (0,l)^2.
inline double poincare_constant(const Grid& g) {
  return g.length / (2.0 * std::numbers::pi);
}

}  // namespace ppgd::spectral
