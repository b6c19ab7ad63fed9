#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "ppgd/core/budget.hpp"
#include "ppgd/core/element.hpp"

namespace ppgd::core {

/// No-op iteration observer.
struct NullObserver {
  template <class V>
  void operator()(int, const V&, double, double) const {}
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Direction and residual norm in one step; fused when the preconditioner
// offers it (saves a transform for spectral elements).
template <class P, class V>
std::pair<V, double> preconditioned_direction(const P& pre, const V& g) {
  if constexpr (requires { pre.apply_inverse_with_norm(g); }) {
    return pre.apply_inverse_with_norm(g);
  } else {
    V d = pre.apply_inverse(g);
    const double rn = std::sqrt(pre.inner(d, d));
    return {std::move(d), rn};
  }
}

template <class V>
bool element_finite(const V& v) {
  if constexpr (requires { v.all_finite(); }) {
    return v.all_finite();
  } else {
    return v.allFinite();
  }
}

// Shared fixed-step loop: v <- v - sigma * L^{-1} grad(k, v). Both PGD and
// PPGD run through this body, so a zero perturbation reproduces the PGD
// iterates bit for bit. The convergence test runs before the update; the
// reported iteration count is the number of applied updates.
template <class V, class P, class GradFn, class Observer>
DescentResult<V> fixed_step_loop(GradFn&& grad_at, const P& pre, V v, double sigma,
                                 const IterationBudget& budget, Observer&& observe) {
  if (!(sigma > 0.0)) throw std::invalid_argument("descent: step size must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  DescentResult<V> out{v, StopReason::max_iterations, 0, {}};
  for (int k = 0;; ++k) {
    V g = grad_at(k, v);
    auto [d, rn] = preconditioned_direction(pre, g);
    out.residual_norms.push_back(rn);
    observe(k, v, rn, seconds_since(t0));
    if (!std::isfinite(rn)) {
      out.iterate = std::move(v);  // gradient blew up; iterate itself is still finite
      out.reason = StopReason::diverged;
      out.iterations = k;
      return out;
    }
    const bool done = budget.metric == StopMetric::residual_precond_norm
                          ? rn <= budget.tolerance
                          : sigma * element_traits<V>::sup_norm(d) <= budget.tolerance;
    if (done) {
      out.iterate = std::move(v);
      out.reason = StopReason::converged;
      out.iterations = k;
      return out;
    }
    if (k == budget.max_iters) {
      out.iterate = std::move(v);
      out.reason = StopReason::max_iterations;
      out.iterations = k;
      return out;
    }
    V next = v;
    next += -sigma * d;
    if (!element_finite(next)) {
      out.iterate = std::move(v);  // last finite iterate
      out.reason = StopReason::diverged;
      out.iterations = k;
      return out;
    }
    v = std::move(next);
  }
}

}  // namespace detail

/// Preconditioned gradient descent with exact gradients. Fixed step runs
///   u_{k+1} = u_k - sigma L^{-1} (dE(u_k) + dF(u_k));
/// exact line search additionally needs the objective's quadratic form and
/// steps u_{k+1} = u_k + alpha_k d_k with alpha_k = <r, d>/<A d, d>.
template <class V, class O, class P, class Observer = NullObserver>
  requires hilbert_element<V> && preconditioner_for<P, V> &&
           exact_gradient_objective_for<O, V>
DescentResult<V> pgd_minimize(O& objective, const P& pre, V v0, StepPolicy step,
                              const IterationBudget& budget, Observer&& observe = {}) {
  if (step.kind == StepPolicy::Kind::fixed) {
    auto grad = [&](int, const V& v) -> V {
      V g = objective.grad_e(v);
      g += 1.0 * objective.grad_f(v);
      return g;
    };
    return detail::fixed_step_loop(grad, pre, std::move(v0), step.sigma, budget, observe);
  }

  if constexpr (quadratic_objective_for<O, V>) {
    const auto t0 = std::chrono::steady_clock::now();
    V v = std::move(v0);
    DescentResult<V> out{v, StopReason::max_iterations, 0, {}};
    for (int k = 0;; ++k) {
      V g = objective.grad_e(v);
      g += 1.0 * objective.grad_f(v);
      auto [d, rn] = detail::preconditioned_direction(pre, g);
      d *= -1.0;  // descent direction
      out.residual_norms.push_back(rn);
      observe(k, v, rn, detail::seconds_since(t0));
      if (!std::isfinite(rn)) {
        out.iterate = std::move(v);
        out.reason = StopReason::diverged;
        out.iterations = k;
        return out;
      }
      const double curv = objective.curvature(d);
      if (curv == 0.0) {  // zero direction: nothing left to do
        out.iterate = std::move(v);
        out.reason = StopReason::converged;
        out.iterations = k;
        return out;
      }
      const double alpha = -element_traits<V>::pairing(g, d) / curv;
      const bool done =
          budget.metric == StopMetric::residual_precond_norm
              ? rn <= budget.tolerance
              : std::abs(alpha) * element_traits<V>::sup_norm(d) <= budget.tolerance;
      if (done) {
        out.iterate = std::move(v);
        out.reason = StopReason::converged;
        out.iterations = k;
        return out;
      }
      if (k == budget.max_iters) {
        out.iterate = std::move(v);
        out.reason = StopReason::max_iterations;
        out.iterations = k;
        return out;
      }
      v += alpha * d;
    }
  } else {
    throw std::invalid_argument(
        "pgd_minimize: exact line search needs an objective with a quadratic form");
  }
}

/// Perturbed preconditioned gradient descent:
///   v_{k+1} = v_k - sigma L^{-1} (dE(v_k) + A(v_k; theta_k)).
/// The theta schedule supplies the solver parameters of the gradient
/// approximation at each iteration; the observer sees (k, v_k, residual
/// dual norm, elapsed seconds) for every visited iterate including the
/// final one. The exact gradient of F is never touched here.
template <class V, class O, class P, class Observer = NullObserver>
  requires hilbert_element<V> && preconditioner_for<P, V> && composite_objective_for<O, V>
DescentResult<V> ppgd_minimize(
    O& objective, const P& pre, V v0, StepPolicy step,
    std::function<typename O::theta_type(int)> theta_schedule, const IterationBudget& budget,
    Observer&& observe = {}) {
  if (step.kind != StepPolicy::Kind::fixed)
    throw std::invalid_argument("ppgd_minimize: requires a fixed step size");
  if (!theta_schedule)
    throw std::invalid_argument("ppgd_minimize: theta schedule must not be empty");
  auto grad = [&](int k, const V& v) -> V {
    V g = objective.grad_e(v);
    g += 1.0 * objective.approx_grad_f(v, theta_schedule(k));
    return g;
  };
  return detail::fixed_step_loop(grad, pre, std::move(v0), step.sigma, budget, observe);
}

}  // namespace ppgd::core
