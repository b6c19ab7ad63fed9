#pragma once

#include <numbers>
#include <utility>

#include "ppgd/spectral/mobility.hpp"
#include "ppgd/spectral/norms.hpp"
#include "ppgd/spectral/symbols.hpp"
#include "ppgd/spectral/transform.hpp"

namespace ppgd::spectral {

/// Handling of pointwise products of band-limited factors. The default
/// multiplies at the collocation nodes; `three_halves` pads to a 3n/2 grid
/// before multiplying, which removes aliasing from quadratic products.
enum class DealiasMode { none, three_halves };

/// Derivative multipliers i*k with the Nyquist row/column zeroed (the sign
/// of the Nyquist derivative is not representable on a real grid).
inline void derivative_in_place(Coefficients& c, int axis) {
  const int n = c.grid.n;
  const double base = 2.0 * std::numbers::pi / c.grid.length;
  for (int i = 0; i < n; ++i) {
    const int ki = mode_of(i, n);
    for (int j = 0; j <= n / 2; ++j) {
      const int k = axis == 0 ? ki : j;
      if (k == n / 2 || k == -n / 2) {
        c.at(i, j) = 0.0;
      } else {
        const std::complex<double> ik(0.0, base * k);
        c.at(i, j) *= ik;
      }
    }
  }
}

/// Physical-space gradient components of a field given by coefficients.
inline std::pair<SpectralField, SpectralField> gradient_fields(TransformContext& ctx,
                                                               const Coefficients& c) {
  Coefficients cx = c, cy = c;
  derivative_in_place(cx, 0);
  derivative_in_place(cy, 1);
  return {ctx.inverse(cx), ctx.inverse(cy)};
}

/// Coefficients of div(w) from the physical components of w.
inline Coefficients divergence_coeffs(TransformContext& ctx, const SpectralField& wx,
                                      const SpectralField& wy) {
  Coefficients cx = ctx.forward(wx);
  Coefficients cy = ctx.forward(wy);
  derivative_in_place(cx, 0);
  derivative_in_place(cy, 1);
  for (std::size_t k = 0; k < cx.c.size(); ++k) cx.c[k] += cy.c[k];
  cx.c[0] = 0.0;  // divergence of a periodic flux has zero mean
  return cx;
}

/// Pointwise product of two fields given by their coefficients, returned in
/// coefficient space. With `three_halves` the product is formed on the
/// padded grid and truncated back.
inline Coefficients product_coeffs(TransformContext& ctx, const Coefficients& a,
                                   const Coefficients& b, DealiasMode mode) {
  if (mode == DealiasMode::none) {
    SpectralField fa = ctx.inverse(a);
    SpectralField fb = ctx.inverse(b);
    return ctx.forward(pointwise_multiply(fa, fb));
  }
  std::vector<double> pa = ctx.padded_physical(a);
  std::vector<double> pb = ctx.padded_physical(b);
  for (std::size_t k = 0; k < pa.size(); ++k) pa[k] *= pb[k];
  return ctx.truncate_from_padded(pa);
}

/// M * g for a fixed mobility and a physical field g. The padded mobility
/// samples can be supplied by the caller to avoid re-padding every call.
inline SpectralField mobility_times(TransformContext& ctx, const MobilityField& m,
                                    const SpectralField& g, DealiasMode mode,
                                    const std::vector<double>* padded_m = nullptr) {
  if (mode == DealiasMode::none) return pointwise_multiply(m.samples(), g);
  std::vector<double> pm =
      padded_m ? *padded_m : ctx.padded_physical(ctx.forward(m.samples()));
  std::vector<double> pg = ctx.padded_physical(ctx.forward(g));
  for (std::size_t k = 0; k < pg.size(); ++k) pg[k] *= pm[k];
  return ctx.inverse(ctx.truncate_from_padded(pg));
}

/// v^3 at the collocation nodes, or on the padded grid when dealiasing.
inline SpectralField cube(TransformContext& ctx, const SpectralField& v, DealiasMode mode) {
  if (mode == DealiasMode::none) return pointwise_cube(v);
  std::vector<double> pv = ctx.padded_physical(ctx.forward(v));
  for (double& x : pv) x = x * x * x;
  return ctx.inverse(ctx.truncate_from_padded(pv));
}

/// Variable-coefficient Laplacian: Lap_M v = div(M grad v). Gradient and
/// divergence act in coefficient space, the mobility multiplies pointwise.
/// The result is projected to mean zero (it is analytically mean-free; the
/// projection removes quadrature drift).
inline SpectralField variable_laplacian(TransformContext& ctx, const MobilityField& m,
                                        const SpectralField& v,
                                        DealiasMode mode = DealiasMode::none) {
  if (!(m.grid() == v.grid()))
    throw std::invalid_argument("variable_laplacian: mobility/field grid mismatch");
  Coefficients c = ctx.forward(v);
  auto [gx, gy] = gradient_fields(ctx, c);
  SpectralField wx = mobility_times(ctx, m, gx, mode);
  SpectralField wy = mobility_times(ctx, m, gy, mode);
  Coefficients d = divergence_coeffs(ctx, wx, wy);
  return ctx.inverse(d);
}

}  // namespace ppgd::spectral
