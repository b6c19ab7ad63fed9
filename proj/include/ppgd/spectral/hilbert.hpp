#pragma once

#include <cmath>
#include <utility>

#include "ppgd/core/element.hpp"
#include "ppgd/spectral/field.hpp"
#include "ppgd/spectral/norms.hpp"
#include "ppgd/spectral/symbols.hpp"
#include "ppgd/spectral/transform.hpp"

namespace ppgd::core {

template <>
struct element_traits<ppgd::spectral::SpectralField> {
  static double sup_norm(const ppgd::spectral::SpectralField& f) { return f.sup_norm(); }
  static double pairing(const ppgd::spectral::SpectralField& phi,
                        const ppgd::spectral::SpectralField& v) {
    return phi.quadrature_inner(v);
  }
};

}  // namespace ppgd::core

namespace ppgd::spectral {

/// The constant-coefficient preconditioner L = lambda (-Lap)^{-1} + gamma - Lap
/// as a core-compatible preconditioner over mean-zero spectral fields. Its
/// inverse zeroes the undetermined mean mode, i.e. it composes with the
/// mean projector.
class SpectralPreconditioner {
 public:
  SpectralPreconditioner(TransformContext& ctx, double lambda, double gamma)
      : ctx_(&ctx),
        lambda_(lambda),
        gamma_(gamma),
        symbol_(precond_symbol(ctx.grid(), lambda, gamma)),
        inv_symbol_(inv_precond_symbol(ctx.grid(), lambda, gamma)) {}

  double lambda() const { return lambda_; }
  double gamma() const { return gamma_; }

  SpectralField apply(const SpectralField& v) const {
    Coefficients c = ctx_->forward(v);
    apply_symbol_in_place(symbol_, c, ZeroMode::project);
    return ctx_->inverse(c);
  }

  SpectralField apply_inverse(const SpectralField& phi) const {
    Coefficients c = ctx_->forward(phi);
    apply_symbol_in_place(inv_symbol_, c, ZeroMode::project);
    return ctx_->inverse(c);
  }

  /// Riesz direction together with its L-norm, sharing one transform:
  /// ||L^{-1} phi||_L = ||phi||_{L^{-1}}.
  std::pair<SpectralField, double> apply_inverse_with_norm(const SpectralField& phi) const {
    Coefficients c = ctx_->forward(phi);
    apply_symbol_in_place(inv_symbol_, c, ZeroMode::project);
    const double norm_sq = symbol_weighted_sq(c, symbol_);
    return {ctx_->inverse(c), std::sqrt(norm_sq)};
  }

  double inner(const SpectralField& u, const SpectralField& v) const {
    Coefficients cu = ctx_->forward(u);
    Coefficients cv = ctx_->forward(v);
    const int n = cu.grid.n, cols = n / 2 + 1;
    const double area = cu.grid.length * cu.grid.length;
    return area * ppgd::detail::pairwise_sum_indexed(
                      0, cu.c.size(), [&](std::size_t idx) {
                        const int j = static_cast<int>(idx) % cols;
                        const double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
                        const auto a = cu.c[idx], b = cv.c[idx];
                        return w * symbol_.m[idx] *
                               (a.real() * b.real() + a.imag() * b.imag());
                      });
  }

  double inner_dual(const SpectralField& phi, const SpectralField& psi) const {
    Coefficients cp = ctx_->forward(phi);
    Coefficients cq = ctx_->forward(psi);
    const int n = cp.grid.n, cols = n / 2 + 1;
    const double area = cp.grid.length * cp.grid.length;
    return area * ppgd::detail::pairwise_sum_indexed(
                      0, cp.c.size(), [&](std::size_t idx) {
                        // the mean and Nyquist residue carry no dual mass
                        if (symbol_.m[idx] == 0.0) return 0.0;
                        const int j = static_cast<int>(idx) % cols;
                        const double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
                        const auto a = cp.c[idx], b = cq.c[idx];
                        return w / symbol_.m[idx] *
                               (a.real() * b.real() + a.imag() * b.imag());
                      });
  }

  double norm(const SpectralField& v) const { return std::sqrt(inner(v, v)); }
  double dual_norm(const SpectralField& phi) const { return std::sqrt(inner_dual(phi, phi)); }

 private:
  TransformContext* ctx_;
  double lambda_;
  double gamma_;
  FourierSymbol symbol_;
  FourierSymbol inv_symbol_;
};

}  // namespace ppgd::spectral
