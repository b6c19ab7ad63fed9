#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "ppgd/core/budget.hpp"
#include "ppgd/detail/sum.hpp"
#include "ppgd/elliptic/problem.hpp"
#include "ppgd/spectral/operators.hpp"

namespace ppgd::elliptic {

struct InnerSolve {
  spectral::SpectralField solution;
  InnerTrace trace;
};

namespace detail {

// h^2 sum M * (ax*bx + ay*by): the mobility-weighted gradient product.
inline double mobility_grad_inner(const spectral::SpectralField& m,
                                  const spectral::SpectralField& ax,
                                  const spectral::SpectralField& ay,
                                  const spectral::SpectralField& bx,
                                  const spectral::SpectralField& by) {
  const double h = m.grid().spacing();
  const double s = ppgd::detail::pairwise_sum_indexed(0, m.size(), [&](std::size_t k) {
    return m.data()[k] * (ax.data()[k] * bx.data()[k] + ay.data()[k] * by.data()[k]);
  });
  return h * h * s;
}

}  // namespace detail

/// Exact line-search step for the quadratic energy
///   F(v) = 1/2 (M grad v, grad v) - <phi, v>:
///   alpha = -[(M grad u, grad d) - <phi, d>] / (M grad d, grad d).
/// Returns nothing when the direction vanishes, which signals convergence.
inline std::optional<double> optimal_step(spectral::TransformContext& ctx,
                                          const EllipticProblem& problem,
                                          const spectral::SpectralField& u,
                                          const spectral::SpectralField& d) {
  auto [ux, uy] = spectral::gradient_fields(ctx, ctx.forward(u));
  auto [dx, dy] = spectral::gradient_fields(ctx, ctx.forward(d));
  const auto& m = problem.mobility->samples();
  const double den = detail::mobility_grad_inner(m, dx, dy, dx, dy);
  if (den == 0.0) return std::nullopt;
  const double num = detail::mobility_grad_inner(m, ux, uy, dx, dy) -
                     problem.rhs.quadrature_inner(d);
  return -num / den;
}

/// Preconditioned gradient descent for (-Lap_M) u = phi with the constant
/// Laplacian as preconditioner and exact line search:
///   r_n = phi + Lap_M u_n,  d_n = (-Lap)^{-1} r_n,  u_{n+1} = u_n + alpha_n d_n.
/// Stops when the step increment (or the residual norm, per the budget
/// metric) drops below tolerance; a budget exhausted without that is
/// reported as `capped`, not as a failure.
inline InnerSolve inner_pgd_solve(spectral::TransformContext& ctx,
                                  const EllipticProblem& problem,
                                  const spectral::SpectralField& u0,
                                  const core::IterationBudget& budget,
                                  spectral::DealiasMode dealias = spectral::DealiasMode::none,
                                  bool record_history = true) {
  using spectral::Coefficients;
  using spectral::SpectralField;

  const auto& grid = ctx.grid();
  if (!(u0.grid() == grid) || !(problem.rhs.grid() == grid))
    throw std::invalid_argument("inner_pgd_solve: grid mismatch with transform context");

  InnerSolve out{SpectralField(grid), {}};
  InnerTrace& tr = out.trace;
  const long fft0 = ctx.fft_count();

  // Exactly zero data: the solution is zero, independent of the start.
  if (problem.rhs.sup_norm() == 0.0) {
    tr.final_energy = 0.0;
    tr.ffts_used = ctx.fft_count() - fft0;
    return out;
  }

  const auto& mob = problem.mobility->samples();
  const spectral::FourierSymbol inv_lap = spectral::inv_neg_laplacian_symbol(grid);
  std::vector<double> padded_mob;
  if (dealias == spectral::DealiasMode::three_halves)
    padded_mob = ctx.padded_physical(ctx.forward(mob));
  const std::vector<double>* padded_mob_ptr =
      dealias == spectral::DealiasMode::three_halves ? &padded_mob : nullptr;

  Coefficients phi_hat = ctx.forward(problem.rhs);
  phi_hat.c[0] = 0.0;
  SpectralField u = mean_zero_project(u0);
  Coefficients u_hat = ctx.forward(u);
  u_hat.c[0] = 0.0;

  SpectralField d(grid);

  for (int n = 0;; ++n) {
    // residual r = phi + Lap_M u in coefficient space
    auto [ux, uy] = spectral::gradient_fields(ctx, u_hat);
    SpectralField wx = spectral::mobility_times(ctx, *problem.mobility, ux, dealias,
                                                padded_mob_ptr);
    SpectralField wy = spectral::mobility_times(ctx, *problem.mobility, uy, dealias,
                                                padded_mob_ptr);
    Coefficients r_hat = spectral::divergence_coeffs(ctx, wx, wy);
    for (std::size_t k = 0; k < r_hat.c.size(); ++k) r_hat.c[k] += phi_hat.c[k];
    r_hat.c[0] = 0.0;

    const double res_norm = std::sqrt(spectral::hminus1_norm_sq(r_hat));
    const double energy = 0.5 * detail::mobility_grad_inner(mob, ux, uy, ux, uy) -
                          spectral::pairing_parseval(phi_hat, u_hat);
    if (record_history) {
      tr.residual_norms.push_back(res_norm);
      tr.energies.push_back(energy);
    }
    tr.final_energy = energy;

    if (!std::isfinite(res_norm) || !std::isfinite(energy)) {
      tr.diverged = true;
      tr.iterations = n;
      break;
    }
    if (budget.metric == core::StopMetric::residual_precond_norm &&
        res_norm <= budget.tolerance) {
      tr.iterations = n;
      break;
    }

    // search direction d = (-Lap)^{-1} r and its exact line-search step
    Coefficients d_hat = r_hat;
    spectral::apply_symbol_in_place(inv_lap, d_hat);
    auto [dx, dy] = spectral::gradient_fields(ctx, d_hat);
    const double den = detail::mobility_grad_inner(mob, dx, dy, dx, dy);
    if (den == 0.0) {  // zero direction: the residual is already gone
      tr.iterations = n;
      break;
    }
    const double num = detail::mobility_grad_inner(mob, ux, uy, dx, dy) -
                       spectral::pairing_parseval(phi_hat, d_hat);
    const double alpha = -num / den;

    ctx.inverse_into(d_hat, d);
    const double incr_sup = std::abs(alpha) * d.sup_norm();
    if (!std::isfinite(alpha) || !std::isfinite(incr_sup)) {
      tr.diverged = true;
      tr.iterations = n;
      break;
    }
    if (budget.metric == core::StopMetric::increment_sup_norm &&
        incr_sup <= budget.tolerance) {
      tr.iterations = n;
      break;
    }
    if (n == budget.max_iters) {
      tr.capped = true;
      tr.iterations = n;
      break;
    }

    for (std::size_t k = 0; k < u_hat.c.size(); ++k) u_hat.c[k] += alpha * d_hat.c[k];
    add_scaled(u, alpha, d);
  }

  out.solution = std::move(u);
  tr.ffts_used = ctx.fft_count() - fft0;
  return out;
}

/// Approximate application of (-Lap_M)^{-1} to a mean-zero right-hand side,
/// warm-started at the caller's iterate. This is the gradient approximation
/// A(.; theta) consumed by the outer perturbed descent.
inline InnerSolve approx_inverse_operator(spectral::TransformContext& ctx,
                                          const spectral::MobilityField& mobility,
                                          const spectral::SpectralField& rhs,
                                          const spectral::SpectralField& warm_start,
                                          const core::IterationBudget& budget,
                                          spectral::DealiasMode dealias =
                                              spectral::DealiasMode::none,
                                          bool record_history = false) {
  EllipticProblem problem(mobility, rhs);
  return inner_pgd_solve(ctx, problem, warm_start, budget, dealias, record_history);
}

}  // namespace ppgd::elliptic
