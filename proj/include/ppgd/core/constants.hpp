#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace ppgd::core {

/// Constants of the dual trap inequality for a mu-strongly convex objective
/// whose shifted gradient is lHat-Lipschitz in the dual norm:
///   <dG(v)-dG(u), v-u> >= c_flat ||v-u||_L^2 + c_sharp ||dG(v)-dG(u)||_{L^-1}^2.
struct DualTrapConstants {
  double c_flat = 0.0;
  double c_sharp = 0.0;
};

inline DualTrapConstants dual_trap_constants(double mu, double l_hat) {
  if (!(mu > 0.0)) throw std::domain_error("dual_trap_constants: mu must be positive");
  if (l_hat < mu)
    throw std::domain_error(
        "dual_trap_constants: Lipschitz constant cannot undercut convexity constant");
  return {(mu * mu + 2.0 * l_hat) / (4.0 * l_hat + 4.0 * mu), 1.0 / (mu + l_hat)};
}

/// Step-size cap and perturbation budget keeping all perturbed iterates in
/// the ball of radius d0 around the minimizer:
///   sigma0 = min{c_sharp, 1/c_flat},
///   eps0   = (1/c_flat + 5 c_sharp / 4)^{-1} d0^2 c_flat.
struct InvariantSetThresholds {
  double sigma0 = 0.0;
  double eps0 = 0.0;
};

inline InvariantSetThresholds invariant_set_thresholds(double c_flat, double c_sharp,
                                                       double d0) {
  if (!(c_flat > 0.0) || !(c_sharp > 0.0))
    throw std::domain_error("invariant_set_thresholds: constants must be positive");
  if (d0 < 0.0) throw std::domain_error("invariant_set_thresholds: d0 must be nonnegative");
  const double sigma0 = std::min(c_sharp, 1.0 / c_flat);
  const double eps0 = d0 * d0 * c_flat / (1.0 / c_flat + 1.25 * c_sharp);
  return {sigma0, eps0};
}

}  // namespace ppgd::core
