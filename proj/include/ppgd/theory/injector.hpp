#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

#include "ppgd/theory/instance.hpp"

namespace ppgd::theory {

/// Synthetic perturbation source for the dense checks. The bounded mode
/// rescales so that ||eta||_{L^-1}^2 equals the cap exactly; the decaying
/// mode shrinks the cap with the current distance to the minimizer; the
/// aligned mode points the perturbation so the descent update pushes the
/// iterate away from the minimizer (worst case for the invariant set).
enum class InjectorMode { zero, bounded, decaying, aligned };

class PerturbationInjector {
 public:
  PerturbationInjector(InjectorMode mode, const DenseInstance& inst,
                       const Eigen::VectorXd& minimizer, double eps_cap,
                       double decay_coeff, std::uint64_t seed)
      : mode_(mode),
        inst_(&inst),
        pre_(inst.L),
        u_(minimizer),
        eps_cap_(eps_cap),
        decay_coeff_(decay_coeff),
        rng_(seed) {}

  Eigen::VectorXd operator()(long /*k*/, const Eigen::VectorXd& v) {
    const int n = inst_->dim();
    if (mode_ == InjectorMode::zero) return Eigen::VectorXd::Zero(n);

    double target_sq = eps_cap_;
    if (mode_ == InjectorMode::decaying) {
      const double dk_sq = pre_.inner(v - u_, v - u_);
      target_sq = std::min(eps_cap_, decay_coeff_ * dk_sq);
    }
    if (target_sq <= 0.0) return Eigen::VectorXd::Zero(n);

    Eigen::VectorXd phi;
    if (mode_ == InjectorMode::aligned) {
      phi = -(inst_->L * (v - u_));
      if (phi.lpNorm<Eigen::Infinity>() == 0.0) phi = random_direction(n);
    } else {
      phi = random_direction(n);
    }
    const double norm_sq = pre_.inner_dual(phi, phi);
    return phi * std::sqrt(target_sq / norm_sq);
  }

 private:
  Eigen::VectorXd random_direction(int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = normal(rng_);
    return g;
  }

  InjectorMode mode_;
  const DenseInstance* inst_;
  DensePreconditioner pre_;
  Eigen::VectorXd u_;
  double eps_cap_;
  double decay_coeff_;
  std::mt19937_64 rng_;
};

}  // namespace ppgd::theory
