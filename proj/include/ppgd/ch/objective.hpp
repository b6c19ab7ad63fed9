#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ppgd/ch/problem.hpp"
#include "ppgd/core/budget.hpp"
#include "ppgd/elliptic/pgd_solver.hpp"
#include "ppgd/spectral/hilbert.hpp"
#include "ppgd/spectral/norms.hpp"
#include "ppgd/spectral/operators.hpp"

namespace ppgd::ch {

namespace detail {
inline void require_mean_zero(const spectral::SpectralField& v, const char* who) {
  if (std::abs(v.mean()) > 1e-12 * std::max(1.0, v.sup_norm()))
    throw std::invalid_argument(std::string(who) + ": field must be mean-zero");
}
}  // namespace detail

/// Objective value
///   G(v) = 1/2 (zeta, v - u*) + 1/4 ||v||_L4^4 + 1/2 |v|_H1^2 - (f, v),
/// where zeta is the caller's (approximate) solve of (-Lap_M) zeta = v - u*.
/// Exact when zeta is exact; with an inexact inner solve the first term is
/// off by O(inner tolerance).
inline double ch_energy(spectral::TransformContext& ctx, const ChProblem& problem,
                        const spectral::SpectralField& v,
                        const spectral::SpectralField& zeta) {
  detail::require_mean_zero(v, "ch_energy");
  spectral::SpectralField diff = v - problem.u_star;
  const double h_inv_term = 0.5 * zeta.quadrature_inner(diff);
  const double quartic = 0.25 * spectral::l4_norm_pow4(v);
  const double h1 = 0.5 * spectral::h1_seminorm_sq(ctx.forward(v));
  const double source = problem.f.quadrature_inner(v);
  return h_inv_term + quartic + h1 - source;
}

struct GradientParts {
  spectral::SpectralField delta_e;         // v^3 - Lap v - f
  spectral::SpectralField approx_delta_f;  // zeta = A(v - u*; theta)
};

inline GradientParts ch_gradient_parts(spectral::TransformContext& ctx,
                                       const ChProblem& problem,
                                       const spectral::SpectralField& v,
                                       const spectral::SpectralField& zeta,
                                       spectral::DealiasMode dealias =
                                           spectral::DealiasMode::none) {
  detail::require_mean_zero(v, "ch_gradient_parts");
  spectral::SpectralField delta_e =
      spectral::apply_symbol(ctx, spectral::neg_laplacian_symbol(ctx.grid()), v);
  delta_e += spectral::cube(ctx, v, dealias);
  delta_e -= problem.f;
  return {std::move(delta_e), zeta};
}

/// Perturbed residual r~ = P0 (f - zeta - v^3 + Lap v) = -P0 (dE + A). The
/// mean projection realizes the elimination of the undetermined constant.
inline spectral::SpectralField perturbed_residual(const GradientParts& parts) {
  spectral::SpectralField r = parts.delta_e + parts.approx_delta_f;
  r *= -1.0;
  return spectral::mean_zero_project(r);
}

/// Inner-solver parameters advanced by the outer iteration.
struct InnerTheta {
  core::IterationBudget budget;
  bool warm_start = true;
};

/// Composite-objective adapter binding the problem to a transform context.
/// grad_e is the explicit nonlinearity, approx_grad_f runs the warm-started
/// inner elliptic solve. The exact gradient of F exists only for constant
/// mobility and is an oracle for tests; calls to it are counted.
class ChObjective {
 public:
  using theta_type = InnerTheta;

  ChObjective(spectral::TransformContext& ctx, const ChProblem& problem,
              spectral::DealiasMode dealias = spectral::DealiasMode::none,
              bool strict_inner = false)
      : ctx_(&ctx),
        problem_(&problem),
        dealias_(dealias),
        strict_inner_(strict_inner),
        neg_lap_(spectral::neg_laplacian_symbol(ctx.grid())),
        inv_neg_lap_(spectral::inv_neg_laplacian_symbol(ctx.grid())),
        last_zeta_(ctx.grid()) {}

  double energy(const spectral::SpectralField& v) {
    return ch_energy(*ctx_, *problem_, v, last_zeta_);
  }

  spectral::SpectralField grad_e(const spectral::SpectralField& v) {
    spectral::Coefficients c = ctx_->forward(v);
    spectral::apply_symbol_in_place(neg_lap_, c);
    spectral::SpectralField g = ctx_->inverse(c);  // -Lap v
    g += spectral::cube(*ctx_, v, dealias_);
    g -= problem_->f;
    return g;
  }

  spectral::SpectralField approx_grad_f(const spectral::SpectralField& v,
                                        const InnerTheta& theta) {
    spectral::SpectralField rhs = spectral::mean_zero_project(v - problem_->u_star);
    const spectral::SpectralField warm =
        theta.warm_start ? v : spectral::SpectralField(ctx_->grid());
    elliptic::InnerSolve solve = elliptic::approx_inverse_operator(
        *ctx_, problem_->mobility, rhs, warm, theta.budget, dealias_, record_inner_history_);
    if (solve.trace.diverged)
      throw std::runtime_error("ChObjective: inner elliptic solve diverged");
    if (solve.trace.capped) {
      if (strict_inner_)
        throw std::runtime_error(
            "ChObjective: inner solve hit its iteration cap with strict_inner set");
      ++capped_solves_;
    }
    last_inner_ = solve.trace;
    total_inner_iters_ += solve.trace.iterations;
    last_zeta_ = std::move(solve.solution);
    return last_zeta_;
  }

  /// Exact gradient of F; only available when the mobility is constant,
  /// where (-Lap_M)^{-1} = (1/M) (-Lap)^{-1}. Test/oracle path.
  spectral::SpectralField grad_f(const spectral::SpectralField& v) {
    if (!problem_->mobility.is_constant())
      throw std::logic_error("ChObjective: exact gradient requires constant mobility");
    ++exact_f_calls_;
    spectral::Coefficients c = ctx_->forward(v - problem_->u_star);
    spectral::apply_symbol_in_place(inv_neg_lap_, c);
    spectral::SpectralField g = ctx_->inverse(c);
    g *= 1.0 / problem_->mobility.m1();
    return g;
  }

  const spectral::SpectralField& last_zeta() const { return last_zeta_; }
  const elliptic::InnerTrace& last_inner() const { return last_inner_; }
  long total_inner_iterations() const { return total_inner_iters_; }
  long capped_inner_solves() const { return capped_solves_; }
  long exact_gradient_calls() const { return exact_f_calls_; }
  void set_record_inner_history(bool on) { record_inner_history_ = on; }

 private:
  spectral::TransformContext* ctx_;
  const ChProblem* problem_;
  spectral::DealiasMode dealias_;
  bool strict_inner_;
  bool record_inner_history_ = false;
  spectral::FourierSymbol neg_lap_;
  spectral::FourierSymbol inv_neg_lap_;
  spectral::SpectralField last_zeta_;
  elliptic::InnerTrace last_inner_;
  long total_inner_iters_ = 0;
  long capped_solves_ = 0;
  long exact_f_calls_ = 0;
};

}  // namespace ppgd::ch
