#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ppgd/spectral/transform.hpp"

namespace ppgd::spectral {

/// Per-mode real multiplier table for a constant-coefficient operator that
/// is diagonal in Fourier space. Inverse symbols are undefined on the zero
/// mode and carry a flag: they act only on mean-zero data.
///
/// All |k|^2-type symbols are built from the same effective wavenumbers as
/// the derivative operators, with the unrepresentable Nyquist mode zeroed.
/// This keeps the preconditioner an exact square of the discrete gradient:
/// with the raw |k|^2 instead, mixed Nyquist modes (where one derivative
/// component dies) acquire tiny preconditioned eigenvalues and the inner
/// conditioning collapses far below M2/M1. Modes with zero effective
/// wavenumber (the mean and pure aliasing residue) are annihilated by the
/// inverse symbols, so every solve lives on the Nyquist-free band.
struct FourierSymbol {
  Grid grid;
  std::vector<double> m;  // half-complex layout, like Coefficients
  bool zero_mode_defined = true;

  explicit FourierSymbol(Grid g)
      : grid(g), m(static_cast<std::size_t>(g.n) * (g.n / 2 + 1), 0.0) {}

  double& at(int i, int j) { return m[static_cast<std::size_t>(i) * (grid.n / 2 + 1) + j]; }
  double at(int i, int j) const { return m[static_cast<std::size_t>(i) * (grid.n / 2 + 1) + j]; }
};

/// Squared effective wavenumber of mode (i, j): Nyquist components carry no
/// representable derivative and count as zero.
inline double effective_k2(const Grid& g, int i, int j) {
  const double base = 2.0 * std::numbers::pi / g.length;
  const int ki = mode_of(i, g.n);
  const double kx = ki == g.n / 2 ? 0.0 : base * ki;
  const double ky = j == g.n / 2 ? 0.0 : base * j;
  return kx * kx + ky * ky;
}

namespace detail_symbols {
template <class F>
FourierSymbol build(Grid g, bool zero_defined, F&& f) {
  FourierSymbol s(g);
  s.zero_mode_defined = zero_defined;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j <= g.n / 2; ++j) {
      const double k2 = effective_k2(g, i, j);
      s.at(i, j) = k2 == 0.0 ? 0.0 : f(k2);
    }
  if (zero_defined) s.at(0, 0) = f(0.0);
  return s;
}
}  // namespace detail_symbols

/// -Laplacian: multiplier |k|^2 (effective wavenumbers).
inline FourierSymbol neg_laplacian_symbol(Grid g) {
  return detail_symbols::build(g, true, [](double k2) { return k2; });
}

/// (-Laplacian)^{-1} on mean-zero data: 1/|k|^2, zero mode flagged, modes
/// with no representable derivative annihilated.
inline FourierSymbol inv_neg_laplacian_symbol(Grid g) {
  return detail_symbols::build(g, false, [](double k2) { return 1.0 / k2; });
}

/// Preconditioner lambda*(-Lap)^{-1} + gamma*I - Lap, diagonal multiplier
/// lambda/|k|^2 + gamma + |k|^2. Defined on mean-zero data only.
inline FourierSymbol precond_symbol(Grid g, double lambda, double gamma) {
  if (!(lambda > 0.0) || gamma < 0.0)
    throw std::invalid_argument("precond_symbol: requires lambda > 0 and gamma >= 0");
  return detail_symbols::build(g, false,
                               [&](double k2) { return lambda / k2 + gamma + k2; });
}

inline FourierSymbol inv_precond_symbol(Grid g, double lambda, double gamma) {
  if (!(lambda > 0.0) || gamma < 0.0)
    throw std::invalid_argument("inv_precond_symbol: requires lambda > 0 and gamma >= 0");
  return detail_symbols::build(g, false,
                               [&](double k2) { return 1.0 / (lambda / k2 + gamma + k2); });
}

/// Zero-mode handling when applying a symbol that is undefined there.
enum class ZeroMode {
  project,  // set the output zero mode to 0 (compose with the mean projector)
  strict,   // require mean-zero input, throw otherwise
};

inline void apply_symbol_in_place(const FourierSymbol& s, Coefficients& c,
                                  ZeroMode policy = ZeroMode::project) {
  if (!(c.grid == s.grid))
    throw std::invalid_argument("apply_symbol: grid mismatch");
  if (!s.zero_mode_defined && policy == ZeroMode::strict) {
    double scale = 0.0;
    for (const auto& v : c.c) scale = std::max(scale, std::abs(v));
    if (std::abs(c.c[0]) > 1e-12 * std::max(1.0, scale))
      throw std::invalid_argument(
          "apply_symbol: inverse symbol applied to data with nonzero mean");
  }
  for (std::size_t k = 0; k < c.c.size(); ++k) c.c[k] *= s.m[k];
  if (!s.zero_mode_defined) c.c[0] = 0.0;
}

/// Field-level application: forward transform, multiply, inverse transform.
inline SpectralField apply_symbol(TransformContext& ctx, const FourierSymbol& s,
                                  const SpectralField& f,
                                  ZeroMode policy = ZeroMode::project) {
  Coefficients c = ctx.forward(f);
  apply_symbol_in_place(s, c, policy);
  return ctx.inverse(c);
}

}  // namespace ppgd::spectral
