#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ppgd/core/constants.hpp"
#include "ppgd/core/descent.hpp"
#include "ppgd/theory/injector.hpp"
#include "ppgd/theory/instance.hpp"

namespace ppgd::theory {

/// Outcome of one empirical check. `violations` must be zero for a pass;
/// `detail` carries the estimated constants for the printed table.
struct CheckReport {
  std::string name;
  bool passed = false;
  long violations = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  double worst_margin = 0.0;  // most negative slack seen (>= 0 when clean)
  std::string detail;
};

namespace detail {

inline Eigen::VectorXd random_in_ball(std::mt19937_64& rng, const DensePreconditioner& pre,
                                      const Eigen::VectorXd& center, double radius) {
  const int n = static_cast<int>(center.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g[i] = normal(rng);
  const double r = radius * std::pow(unif(rng), 1.0 / n);
  return center + g * (r / pre.norm(g));
}

// Largest sampled value of ||dG(v)-dG(u)||_{L^-1}^2 / <dG(v)-dG(u), v-u>,
// optionally for the shifted objective G - (mu/4)||.||_L^2 whose gradient
// is dG(v) - (mu/2) L v. With `include_bregman` the (asymmetric) ratios
// against the Bregman divergence join the maximum; those are the ones the
// lower-trap inequality actually needs for non-quadratic objectives.
inline double sample_dual_lipschitz(const DenseObjective& obj, const DensePreconditioner& pre,
                                    const Eigen::VectorXd& center, double radius,
                                    long samples, double shift_mu, std::mt19937_64& rng,
                                    bool include_bregman = false) {
  const auto& L = obj.instance().L;
  double worst = 0.0;
  for (long s = 0; s < samples; ++s) {
    const Eigen::VectorXd u = random_in_ball(rng, pre, center, radius);
    const Eigen::VectorXd v = random_in_ball(rng, pre, center, radius);
    Eigen::VectorXd gap = obj.gradient(v) - obj.gradient(u);
    if (shift_mu != 0.0) gap -= 0.5 * shift_mu * (L * (v - u));
    const double pair = gap.dot(v - u);
    if (pair <= 1e-14) continue;
    const double dual_sq = pre.inner_dual(gap, gap);
    worst = std::max(worst, dual_sq / pair);
    if (include_bregman && shift_mu == 0.0) {
      const double breg_uv = obj.energy(v) - obj.energy(u) - obj.gradient(u).dot(v - u);
      const double breg_vu = obj.energy(u) - obj.energy(v) - obj.gradient(v).dot(u - v);
      if (breg_uv > 1e-14) worst = std::max(worst, dual_sq / (2.0 * breg_uv));
      if (breg_vu > 1e-14) worst = std::max(worst, dual_sq / (2.0 * breg_vu));
    }
  }
  return worst;
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace detail

/// Dual lower trap: estimate the dual Lipschitz constant of dG on the ball
/// by pair sampling (inflated 1.1x), then verify on fresh pairs that
///   G(u) + <dG(u), v-u> + (1/(2 Lhat)) ||dG(v)-dG(u)||_{L^-1}^2 <= G(v) + 1e-10.
inline CheckReport check_dual_lower_trap(const DenseInstance& inst, double ball_radius,
                                         long samples, std::uint64_t seed) {
  DenseObjective obj(inst);
  DensePreconditioner pre(inst.L);
  const Eigen::VectorXd center = newton_minimize(inst);
  std::mt19937_64 rng(seed);

  const double l_hat = 1.1 * detail::sample_dual_lipschitz(obj, pre, center, ball_radius,
                                                           samples, 0.0, rng, true);

  CheckReport rep{"dual-lower-trap", false, 0, samples, seed, 0.0, ""};
  double worst = 0.0;
  for (long s = 0; s < samples; ++s) {
    const Eigen::VectorXd u = detail::random_in_ball(rng, pre, center, ball_radius);
    const Eigen::VectorXd v =
        s == 0 ? u : detail::random_in_ball(rng, pre, center, ball_radius);  // u = v edge
    const Eigen::VectorXd gap = obj.gradient(v) - obj.gradient(u);
    const double lhs = obj.energy(u) + obj.gradient(u).dot(v - u) +
                       pre.inner_dual(gap, gap) / (2.0 * l_hat);
    const double margin = obj.energy(v) + 1e-10 - lhs;
    worst = std::min(worst, margin);
    if (margin < 0.0) ++rep.violations;
  }
  rep.worst_margin = worst;
  rep.passed = rep.violations == 0;
  rep.detail = "Lhat=" + detail::fmt(l_hat);
  return rep;
}

/// Dual trap: with mu from the generalized eigenvalue bound and Lhat from
/// pair sampling (on both the raw and the mu/4-shifted objective, inflated
/// 1.1x), verify on fresh pairs that
///   <dG(v)-dG(u), v-u> >= c_flat ||v-u||_L^2 + c_sharp ||dG(v)-dG(u)||_{L^-1}^2.
inline CheckReport check_dual_trap(const DenseInstance& inst, double ball_radius,
                                   long samples, std::uint64_t seed) {
  DenseObjective obj(inst);
  DensePreconditioner pre(inst.L);
  const Eigen::VectorXd center = newton_minimize(inst);
  std::mt19937_64 rng(seed);

  const double mu = inst.mu();
  const double ratio_raw =
      detail::sample_dual_lipschitz(obj, pre, center, ball_radius, samples, 0.0, rng);
  const double ratio_shifted =
      detail::sample_dual_lipschitz(obj, pre, center, ball_radius, samples, mu, rng);
  const double l_hat = 1.1 * std::max({ratio_raw, ratio_shifted, mu});
  const auto c = core::dual_trap_constants(mu, l_hat);

  CheckReport rep{"dual-trap", false, 0, samples, seed, 0.0, ""};
  double worst = 0.0;
  for (long s = 0; s < samples; ++s) {
    const Eigen::VectorXd u = detail::random_in_ball(rng, pre, center, ball_radius);
    const Eigen::VectorXd v =
        s == 0 ? u : detail::random_in_ball(rng, pre, center, ball_radius);
    const Eigen::VectorXd diff = v - u;
    const Eigen::VectorXd gap = obj.gradient(v) - obj.gradient(u);
    const double pair = gap.dot(diff);
    const double rhs =
        c.c_flat * pre.inner(diff, diff) + c.c_sharp * pre.inner_dual(gap, gap);
    const double margin = pair - rhs + 1e-10 * std::max(1.0, std::abs(pair));
    worst = std::min(worst, margin);
    if (margin < 0.0) ++rep.violations;
  }
  rep.worst_margin = worst;
  rep.passed = rep.violations == 0;
  rep.detail = "mu=" + detail::fmt(mu) + " Lhat=" + detail::fmt(l_hat) +
               " c_flat=" + detail::fmt(c.c_flat) + " c_sharp=" + detail::fmt(c.c_sharp);
  return rep;
}

/// Shared setup for the perturbed-descent checks: oracle minimizer, dual
/// trap constants estimated over the ball of radius d0 around it, and the
/// resulting step/perturbation thresholds.
struct PerturbedRunSetup {
  Eigen::VectorXd minimizer;
  double d0 = 0.0;
  double mu = 0.0;
  double l_hat = 0.0;
  core::DualTrapConstants constants;
  core::InvariantSetThresholds thresholds;
  Eigen::VectorXd v0;
};

inline PerturbedRunSetup make_perturbed_setup(const DenseInstance& inst, double d0,
                                              long samples, std::uint64_t seed) {
  DenseObjective obj(inst);
  DensePreconditioner pre(inst.L);
  PerturbedRunSetup s;
  s.minimizer = newton_minimize(inst);
  s.d0 = d0;
  s.mu = inst.mu();
  std::mt19937_64 rng(seed);
  const double ratio_raw =
      detail::sample_dual_lipschitz(obj, pre, s.minimizer, d0, samples, 0.0, rng);
  const double ratio_shifted =
      detail::sample_dual_lipschitz(obj, pre, s.minimizer, d0, samples, s.mu, rng);
  s.l_hat = 1.1 * std::max({ratio_raw, ratio_shifted, s.mu});
  s.constants = core::dual_trap_constants(s.mu, s.l_hat);
  s.thresholds = core::invariant_set_thresholds(s.constants.c_flat, s.constants.c_sharp, d0);
  // start on the boundary of the ball, along a seeded direction
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd dir(inst.dim());
  for (int i = 0; i < inst.dim(); ++i) dir[i] = normal(rng);
  s.v0 = s.minimizer + dir * (d0 / pre.norm(dir));
  return s;
}

/// Invariant set: run the perturbed descent with sigma = sigma0 and
/// ||eta_k||_{L^-1}^2 <= eps0 and require every iterate to stay within
/// d0 (1 + 1e-10) of the minimizer. `sigma_scale`/`eps_scale` exist as a
/// stress hook: pushing them far above 1 must break containment.
inline CheckReport check_invariant_set(const DenseInstance& inst, double d0, long iters,
                                       std::uint64_t seed,
                                       InjectorMode mode = InjectorMode::aligned,
                                       double sigma_scale = 1.0, double eps_scale = 1.0) {
  PerturbedRunSetup s = make_perturbed_setup(inst, d0, 2000, seed);
  DensePreconditioner pre(inst.L);
  PerturbationInjector injector(mode, inst, s.minimizer,
                                eps_scale * s.thresholds.eps0, 0.0, seed + 1);
  DenseObjective obj(inst, std::ref(injector));

  CheckReport rep{"invariant-set", false, 0, iters, seed, 0.0, ""};
  double worst = 0.0;
  long first_violation = -1;
  auto observe = [&](int k, const Eigen::VectorXd& v, double, double) {
    const double dk = pre.norm(v - s.minimizer);
    const double margin = s.d0 * (1.0 + 1e-10) - dk;
    worst = std::min(worst, margin);
    if (margin < 0.0) {
      ++rep.violations;
      if (first_violation < 0) first_violation = k;
    }
  };
  core::ppgd_minimize<Eigen::VectorXd>(
      obj, pre, s.v0, core::StepPolicy::fixed(sigma_scale * s.thresholds.sigma0),
      [](int k) { return static_cast<long>(k); },
      core::IterationBudget(static_cast<int>(iters), 1e-300), observe);

  rep.worst_margin = worst;
  rep.passed = rep.violations == 0;
  rep.detail = "sigma0=" + detail::fmt(s.thresholds.sigma0) +
               " eps0=" + detail::fmt(s.thresholds.eps0) + " d0=" + detail::fmt(d0);
  if (first_violation >= 0) rep.detail += " first_violation_k=" + std::to_string(first_violation);
  return rep;
}

/// Convergence bound: with a bounded random injector at eps0, verify at
/// every k that  min_{i<=k} ||v_i - u||_L^2 <= (d0^2/(mu sigma)) rho^k + eps d0,
/// rho = 1 - mu sigma, eps = sqrt(eps0).
inline CheckReport check_convergence_bound(const DenseInstance& inst, double d0, long iters,
                                           std::uint64_t seed) {
  PerturbedRunSetup s = make_perturbed_setup(inst, d0, 2000, seed);
  DensePreconditioner pre(inst.L);
  const double sigma = s.thresholds.sigma0;
  const double rho = 1.0 - s.mu * sigma;
  const double eps = std::sqrt(s.thresholds.eps0);

  PerturbationInjector injector(InjectorMode::bounded, inst, s.minimizer,
                                s.thresholds.eps0, 0.0, seed + 1);
  DenseObjective obj(inst, std::ref(injector));

  CheckReport rep{"convergence-bound", false, 0, iters, seed, 0.0, ""};
  double worst = 0.0;
  double best_so_far = std::numeric_limits<double>::infinity();
  auto observe = [&](int k, const Eigen::VectorXd& v, double, double) {
    const double dk_sq = pre.inner(v - s.minimizer, v - s.minimizer);
    best_so_far = std::min(best_so_far, dk_sq);
    const double bound =
        (s.d0 * s.d0 / (s.mu * sigma)) * std::pow(rho, k) + eps * s.d0 + 1e-10;
    const double margin = bound - best_so_far;
    worst = std::min(worst, margin);
    if (margin < 0.0) ++rep.violations;
  };
  core::ppgd_minimize<Eigen::VectorXd>(
      obj, pre, s.v0, core::StepPolicy::fixed(sigma),
      [](int k) { return static_cast<long>(k); },
      core::IterationBudget(static_cast<int>(iters), 1e-300), observe);

  rep.worst_margin = worst;
  rep.passed = rep.violations == 0;
  rep.detail = "rho=" + detail::fmt(rho) + " eps=" + detail::fmt(eps);
  return rep;
}

/// Error-free rate: with perturbations additionally capped by
/// (mu/(4 d0)) d_k^2, consecutive squared distances must contract at least
/// by (1 - mu sigma / 2). Checked until d_k hits the oracle accuracy floor.
inline CheckReport check_error_free_rate(const DenseInstance& inst, double d0, long iters,
                                         std::uint64_t seed) {
  PerturbedRunSetup s = make_perturbed_setup(inst, d0, 2000, seed);
  DensePreconditioner pre(inst.L);
  const double sigma = s.thresholds.sigma0;
  const double coeff = s.mu / (4.0 * d0);

  PerturbationInjector injector(InjectorMode::decaying, inst, s.minimizer,
                                s.thresholds.eps0, coeff, seed + 1);
  DenseObjective obj(inst, std::ref(injector));

  CheckReport rep{"error-free-rate", false, 0, iters, seed, 0.0, ""};
  const double rate = 1.0 - 0.5 * s.mu * sigma;
  // The oracle minimizer is accurate to ~1e-12, so distances below
  // 1e-9 * d0 are dominated by that floor and are not rate-checked.
  const double floor = 1e-9 * d0;
  double prev_sq = -1.0;
  double worst = 0.0;
  auto observe = [&](int, const Eigen::VectorXd& v, double, double) {
    const double dk_sq = pre.inner(v - s.minimizer, v - s.minimizer);
    if (prev_sq > floor * floor) {
      const double margin = rate * prev_sq - dk_sq;
      worst = std::min(worst, margin);
      if (margin < 0.0) ++rep.violations;
    }
    prev_sq = dk_sq;
  };
  core::ppgd_minimize<Eigen::VectorXd>(
      obj, pre, s.v0, core::StepPolicy::fixed(sigma),
      [](int k) { return static_cast<long>(k); },
      core::IterationBudget(static_cast<int>(iters), 1e-300), observe);

  rep.worst_margin = worst;
  rep.passed = rep.violations == 0;
  rep.detail = "rate=" + detail::fmt(rate);
  return rep;
}

/// Geometric convergence of the unperturbed method: distances must stay
/// under rho^k d0 with rho = 1 - sigma mu (quadratic case, sigma = 1/L),
/// and the fitted per-step factor must not exceed rho. For a quartic term
/// the step comes from the sampled ball Lipschitz constant and only a
/// fitted factor < 1 is asserted.
inline CheckReport check_pgd_geometric(const DenseInstance& inst, double d0, long iters,
                                       std::uint64_t seed) {
  DensePreconditioner pre(inst.L);
  DenseObjective obj(inst);
  const Eigen::VectorXd u = newton_minimize(inst);
  const double mu = inst.mu();
  std::mt19937_64 lip_rng(seed ^ 0x5851f42d4c957f2dull);
  const double lip =
      inst.quartic_beta == 0.0
          ? inst.quadratic_lipschitz()
          : 1.1 * std::max(mu, detail::sample_dual_lipschitz(obj, pre, u, d0, 2000, 0.0,
                                                             lip_rng));
  const double sigma = 1.0 / lip;
  const double rho = 1.0 - sigma * mu;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd dir(inst.dim());
  for (int i = 0; i < inst.dim(); ++i) dir[i] = normal(rng);
  const Eigen::VectorXd v0 = u + dir * (d0 / pre.norm(dir));

  CheckReport rep{"pgd-geometric", false, 0, iters, seed, 0.0, ""};
  const double floor = 1e-12 * d0;
  std::vector<double> dists;
  auto observe = [&](int k, const Eigen::VectorXd& v, double, double) {
    const double dk = pre.norm(v - u);
    dists.push_back(dk);
    if (inst.quartic_beta == 0.0) {
      const double margin = std::pow(rho, k) * d0 * (1.0 + 1e-10) + floor - dk;
      if (margin < 0.0) ++rep.violations;
      rep.worst_margin = std::min(rep.worst_margin, margin);
    }
  };
  core::pgd_minimize<Eigen::VectorXd>(obj, pre, v0, core::StepPolicy::fixed(sigma),
                                      core::IterationBudget(static_cast<int>(iters), 1e-300),
                                      observe);

  // fitted per-step factor over the decaying range
  double log_sum = 0.0;
  long count = 0;
  for (std::size_t k = 1; k < dists.size(); ++k) {
    if (dists[k - 1] > floor && dists[k] > 0.0) {
      log_sum += std::log(dists[k] / dists[k - 1]);
      ++count;
    }
  }
  const double fitted = count ? std::exp(log_sum / count) : 0.0;
  if (fitted > (inst.quartic_beta == 0.0 ? rho + 1e-6 : 1.0 - 1e-9)) ++rep.violations;
  rep.passed = rep.violations == 0;
  rep.detail = "rho=" + detail::fmt(rho) + " fitted=" + detail::fmt(fitted);
  return rep;
}

/// Default desk-scale suite behind `ppgd check`. Instances are normalized
/// to mu >= 1, where the closed-form trap constants are on their valid
/// side; the stress hook makes the invariant-set check fail on purpose.
inline std::vector<CheckReport> run_all_checks(std::uint64_t seed, bool force_failure = false) {
  std::vector<CheckReport> reports;
  const long pair_samples = 10000;
  const long iters = 500;

  DenseInstance quad_al = DenseInstance::random(8, 0.0, seed ^ 0x9e3779b97f4a7c15ull, 1.0, true);
  DenseInstance quad_gen = DenseInstance::random(8, 0.0, seed + 1, 1.2, false);
  DenseInstance quartic = DenseInstance::random(8, 1.0, seed + 2, 1.2, false);

  auto named = [&](CheckReport r, const std::string& suffix) {
    r.name += suffix;
    reports.push_back(std::move(r));
  };

  named(check_dual_lower_trap(quad_al, 2.0, pair_samples, seed), "/quadratic");
  named(check_dual_lower_trap(quartic, 2.0, pair_samples, seed), "/quartic");
  named(check_dual_trap(quad_al, 2.0, pair_samples, seed), "/quadratic");
  named(check_dual_trap(quartic, 2.0, pair_samples, seed), "/quartic");
  named(check_invariant_set(quartic, 10.0, iters, seed, InjectorMode::aligned,
                            force_failure ? 75.0 : 1.0, force_failure ? 25.0 : 1.0),
        force_failure ? "/quartic(stressed)" : "/quartic");
  named(check_invariant_set(quad_gen, 10.0, iters, seed, InjectorMode::bounded), "/quadratic");
  named(check_convergence_bound(quad_gen, 10.0, iters, seed), "/quadratic");
  named(check_convergence_bound(quartic, 10.0, iters, seed), "/quartic");
  named(check_error_free_rate(quad_gen, 10.0, iters, seed), "/quadratic");
  named(check_error_free_rate(quartic, 10.0, iters, seed), "/quartic");
  named(check_pgd_geometric(quad_gen, 5.0, 200, seed), "/quadratic");
  named(check_pgd_geometric(quartic, 5.0, 200, seed), "/quartic");
  return reports;
}

}  // namespace ppgd::theory
