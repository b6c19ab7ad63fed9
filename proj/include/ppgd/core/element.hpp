#pragma once

#include <cmath>
#include <concepts>

namespace ppgd::core {

/// Adapter between the descent loops and a concrete Hilbert-space element
/// type. Specializations provide the sup norm (used by increment stopping)
/// and the duality pairing; linear arithmetic is expected through operators.
template <class V>
struct element_traits;

template <class V>
concept hilbert_element = std::copyable<V> && requires(const V& a, V& m, double s) {
  { element_traits<V>::sup_norm(a) } -> std::convertible_to<double>;
  { element_traits<V>::pairing(a, a) } -> std::convertible_to<double>;
  m += s * a;
};

/// Symmetric, coercive map H -> H* defining the working inner product.
/// `apply_inverse` realizes the Riesz map; `inner` and `inner_dual` are the
/// induced primal and dual inner products.
template <class P, class V>
concept preconditioner_for = requires(const P& p, const V& v) {
  { p.apply(v) } -> std::convertible_to<V>;
  { p.apply_inverse(v) } -> std::convertible_to<V>;
  { p.inner(v, v) } -> std::convertible_to<double>;
  { p.inner_dual(v, v) } -> std::convertible_to<double>;
};

/// Objective split G = E + F where the gradient of F is reached through an
/// approximation A(v; theta). The exact gradient of F, when available at
/// all, is an oracle for tests and never enters production paths.
template <class O, class V>
concept composite_objective_for =
    requires(O& o, const V& v, const typename O::theta_type& th) {
      { o.energy(v) } -> std::convertible_to<double>;
      { o.grad_e(v) } -> std::convertible_to<V>;
      { o.approx_grad_f(v, th) } -> std::convertible_to<V>;
    };

template <class O, class V>
concept exact_gradient_objective_for = requires(O& o, const V& v) {
  { o.grad_e(v) } -> std::convertible_to<V>;
  { o.grad_f(v) } -> std::convertible_to<V>;
};

/// Additionally exposes the quadratic form <A d, d>, enabling exact line
/// search for quadratic energies.
template <class O, class V>
concept quadratic_objective_for =
    exact_gradient_objective_for<O, V> && requires(O& o, const V& d) {
      { o.curvature(d) } -> std::convertible_to<double>;
    };

}  // namespace ppgd::core
