#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ppgd/ch/problem.hpp"
#include "ppgd/ch/solve.hpp"
#include "ppgd/elliptic/pgd_solver.hpp"
#include "ppgd/spectral/norms.hpp"

using namespace ppgd;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

spectral::SpectralField unit_hminus1(spectral::TransformContext& ctx,
                                     const spectral::SpectralField& f) {
  const double norm = spectral::hminus1_norm(ctx, f);
  spectral::SpectralField out = f;
  out *= 1.0 / norm;
  return out;
}
}  // namespace

TEST_CASE("constant mobility solves in exactly one iteration with unit step") {
  spectral::Grid grid(32, 1.0);
  spectral::TransformContext ctx(grid);
  auto mobility = spectral::MobilityField::constant(grid, 1.0);
  spectral::SpectralField phi = spectral::mean_zero_project(
      spectral::SpectralField::sample(grid, [&](double x, double y) {
        return std::cos(2.0 * kPi * x) + 0.3 * std::sin(4.0 * kPi * y);
      }));
  elliptic::EllipticProblem problem(mobility, phi);

  // first step size is exactly 1 when the preconditioner equals the operator
  spectral::SpectralField u0(grid);
  spectral::SpectralField d0 = spectral::apply_symbol(
      ctx, spectral::inv_neg_laplacian_symbol(grid), phi);
  auto alpha = elliptic::optimal_step(ctx, problem, u0, d0);
  REQUIRE(alpha.has_value());
  CHECK(*alpha == Approx(1.0).margin(1e-12));

  auto solve = elliptic::inner_pgd_solve(ctx, problem, u0,
                                         core::IterationBudget(100, 1e-10));
  CHECK(solve.trace.iterations == 1);
  CHECK_FALSE(solve.trace.capped);
  // the solution is the plain inverse Laplacian of phi
  for (std::size_t k = 0; k < d0.size(); ++k)
    CHECK(solve.solution.values()[k] == Approx(d0.values()[k]).margin(1e-12));
}

TEST_CASE("zero right-hand side returns the zero field in zero iterations") {
  spectral::Grid grid(16, 1.0);
  spectral::TransformContext ctx(grid);
  auto mobility = spectral::MobilityField::constant(grid, 2.0);
  elliptic::EllipticProblem problem(mobility, spectral::SpectralField(grid));
  spectral::SpectralField warm = spectral::SpectralField::sample(
      grid, [&](double x, double) { return std::cos(2.0 * kPi * x); });
  auto solve = elliptic::inner_pgd_solve(ctx, problem, warm,
                                         core::IterationBudget(100, 1e-10));
  CHECK(solve.trace.iterations == 0);
  CHECK(solve.solution.sup_norm() == 0.0);
}

TEST_CASE("optimal step values") {
  spectral::Grid grid(16, 1.0);
  spectral::TransformContext ctx(grid);
  spectral::SpectralField phi = spectral::mean_zero_project(
      spectral::SpectralField::sample(grid, [&](double, double y) {
        return std::cos(2.0 * kPi * y);
      }));

  SECTION("constant mobility c gives alpha = 1/c on the first step") {
    for (double c : {1.0, 2.0, 5.0}) {
      auto mobility = spectral::MobilityField::constant(grid, c);
      elliptic::EllipticProblem problem(mobility, phi);
      spectral::SpectralField u0(grid);
      spectral::SpectralField d = spectral::apply_symbol(
          ctx, spectral::inv_neg_laplacian_symbol(grid), phi);
      auto alpha = elliptic::optimal_step(ctx, problem, u0, d);
      REQUIRE(alpha.has_value());
      CHECK(*alpha == Approx(1.0 / c).margin(1e-12));
    }
  }

  SECTION("zero direction signals convergence instead of dividing by zero") {
    auto mobility = spectral::MobilityField::constant(grid, 1.0);
    elliptic::EllipticProblem problem(mobility, phi);
    CHECK_FALSE(elliptic::optimal_step(ctx, problem, spectral::SpectralField(grid),
                                       spectral::SpectralField(grid))
                    .has_value());
  }

  SECTION("matches a golden-section line minimization of the energy") {
    spectral::TransformContext ctx16(grid);
    auto mobility = spectral::MobilityField::from_samples(spectral::SpectralField::sample(
        grid, [&](double x, double y) {
          return 1.5 + 0.4 * std::cos(2.0 * kPi * x) + 0.3 * std::sin(2.0 * kPi * y);
        }));
    elliptic::EllipticProblem problem(mobility, phi);
    spectral::SpectralField u = oracles::random_smooth_field(ctx16, 5, 0.7);
    spectral::SpectralField d = oracles::random_smooth_field(ctx16, 6, 0.9);

    auto energy_along = [&](double a) {
      spectral::SpectralField w = u;
      spectral::add_scaled(w, a, d);
      auto [wx, wy] = spectral::gradient_fields(ctx16, ctx16.forward(w));
      double quad = 0.0;
      const auto& m = mobility.samples();
      const double h = grid.spacing();
      for (std::size_t k = 0; k < m.size(); ++k)
        quad += m.values()[k] * (wx.values()[k] * wx.values()[k] +
                                 wy.values()[k] * wy.values()[k]);
      return 0.5 * h * h * quad - phi.quadrature_inner(w);
    };
    const double oracle = oracles::golden_section_minimize(energy_along, -10.0, 10.0, 1e-12);
    auto alpha = elliptic::optimal_step(ctx16, problem, u, d);
    REQUIRE(alpha.has_value());
    CHECK(*alpha == Approx(oracle).margin(1e-8));
  }
}

TEST_CASE("variable mobility solve matches the dense direct solver") {
  spectral::Grid grid(16, 1.0);
  spectral::TransformContext ctx(grid);
  auto mobility = spectral::MobilityField::from_samples(spectral::SpectralField::sample(
      grid, [&](double x, double) { return 2.0 + std::cos(2.0 * kPi * x); }));
  spectral::SpectralField phi = spectral::mean_zero_project(spectral::SpectralField::sample(
      grid, [&](double, double y) { return std::cos(2.0 * kPi * y); }));
  elliptic::EllipticProblem problem(mobility, phi);

  oracles::DenseVariableLaplacianInverse dense(ctx, mobility);
  spectral::SpectralField exact = dense.solve(phi);

  auto solve = elliptic::inner_pgd_solve(ctx, problem, spectral::SpectralField(grid),
                                         core::IterationBudget(1000, 1e-12));
  CHECK_FALSE(solve.trace.capped);
  double err = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k)
    err = std::max(err, std::abs(solve.solution.values()[k] - exact.values()[k]));
  CHECK(err <= 1e-8);
}

TEST_CASE("energy decreases monotonically under exact line search") {
  spectral::Grid grid(32, 1.0);
  spectral::TransformContext ctx(grid);
  ch::ChProblem chp = ch::build_problem({grid, 0.1, 1.0, 0.0});
  spectral::SpectralField phi = spectral::mean_zero_project(-1.0 * chp.u_star);
  elliptic::EllipticProblem problem(chp.mobility, phi);

  auto solve = elliptic::inner_pgd_solve(ctx, problem, spectral::SpectralField(grid),
                                         core::IterationBudget(1000, 1e-8));
  REQUIRE(solve.trace.energies.size() >= 3);
  for (std::size_t k = 1; k < solve.trace.energies.size(); ++k)
    CHECK(solve.trace.energies[k] <=
          solve.trace.energies[k - 1] + 1e-12 * std::abs(solve.trace.energies[k - 1]));
}

TEST_CASE("residual contraction stays under the conditioning bound") {
  spectral::Grid grid(64, 1.0);
  spectral::TransformContext ctx(grid);
  ch::ChProblem chp = ch::build_problem({grid, 0.1, 1.0, 0.0});
  spectral::SpectralField phi = spectral::mean_zero_project(-1.0 * chp.u_star);
  elliptic::EllipticProblem problem(chp.mobility, phi);
  auto solve = elliptic::inner_pgd_solve(ctx, problem, spectral::SpectralField(grid),
                                         core::IterationBudget(2000, 1e-8));
  const auto& res = solve.trace.residual_norms;
  REQUIRE(res.size() >= 4);
  double log_sum = 0.0;
  long count = 0;
  for (std::size_t k = 2; k < res.size(); ++k) {
    log_sum += std::log(res[k] / res[k - 1]);
    ++count;
  }
  const double kappa = chp.mobility.m2() / chp.mobility.m1();
  const double bound = (kappa - 1.0) / (kappa + 1.0) + 0.05;
  CHECK(std::exp(log_sum / count) <= bound);
}

TEST_CASE("iteration counts are uniform over right-hand sides of unit dual norm") {
  spectral::Grid grid(32, 1.0);
  spectral::TransformContext ctx(grid);

  auto count_spread = [&](double delta0, int* out_max) {
    ch::ChProblem chp = ch::build_problem({grid, delta0, 1.0, 0.0});
    int min_iters = 1 << 30, max_iters = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      spectral::SpectralField rhs =
          unit_hminus1(ctx, oracles::random_phase_field(ctx, 1000 + seed));
      elliptic::EllipticProblem problem(chp.mobility, rhs);
      auto solve = elliptic::inner_pgd_solve(
          ctx, problem, spectral::SpectralField(grid),
          core::IterationBudget(2000, 1e-6, core::StopMetric::residual_precond_norm));
      REQUIRE_FALSE(solve.trace.capped);
      min_iters = std::min(min_iters, solve.trace.iterations);
      max_iters = std::max(max_iters, solve.trace.iterations);
    }
    if (out_max) *out_max = max_iters;
    return max_iters - min_iters;
  };

  // at a moderate mobility ratio the counts collapse onto one value
  CHECK(count_spread(0.3, nullptr) <= 2);

  // at the reference ratio the counts remain uniformly bounded; spread and
  // cap frozen from the brute-force survey (counts 38..46 over this family)
  int max_iters = 0;
  CHECK(count_spread(0.1, &max_iters) <= 10);
  CHECK(max_iters <= 60);
}

TEST_CASE("iterates preserve the zero mean") {
  spectral::Grid grid(32, 1.0);
  spectral::TransformContext ctx(grid);
  ch::ChProblem chp = ch::build_problem({grid, 0.1, 1.0, 0.0});
  spectral::SpectralField phi = spectral::mean_zero_project(-1.0 * chp.u_star);
  elliptic::EllipticProblem problem(chp.mobility, phi);
  auto solve = elliptic::inner_pgd_solve(ctx, problem, spectral::SpectralField(grid),
                                         core::IterationBudget(500, 1e-8));
  CHECK(std::abs(solve.solution.mean()) <=
        1e-12 * std::max(1.0, solve.solution.sup_norm()));
}

TEST_CASE("budget exhaustion is flagged capped, not fatal") {
  spectral::Grid grid(32, 1.0);
  spectral::TransformContext ctx(grid);
  ch::ChProblem chp = ch::build_problem({grid, 0.01, 1.0, 0.0});
  spectral::SpectralField phi = spectral::mean_zero_project(-1.0 * chp.u_star);
  elliptic::EllipticProblem problem(chp.mobility, phi);
  auto solve = elliptic::inner_pgd_solve(ctx, problem, spectral::SpectralField(grid),
                                         core::IterationBudget(3, 1e-12));
  CHECK(solve.trace.capped);
  CHECK(solve.trace.iterations == 3);
  CHECK_FALSE(solve.trace.diverged);
}

TEST_CASE("approximate inverse operator") {
  spectral::Grid grid(32, 1.0);
  spectral::TransformContext ctx(grid);

  SECTION("zero right-hand side gives zero") {
    auto mobility = spectral::MobilityField::constant(grid, 1.0);
    auto solve = elliptic::approx_inverse_operator(ctx, mobility,
                                                   spectral::SpectralField(grid),
                                                   spectral::SpectralField(grid),
                                                   core::IterationBudget(100, 1e-10));
    CHECK(solve.solution.sup_norm() == 0.0);
  }

  SECTION("constant mobility needs one iteration") {
    auto mobility = spectral::MobilityField::constant(grid, 1.0);
    spectral::SpectralField rhs = oracles::random_smooth_field(ctx, 9);
    auto solve = elliptic::approx_inverse_operator(ctx, mobility, rhs,
                                                   spectral::SpectralField(grid),
                                                   core::IterationBudget(100, 1e-10));
    CHECK(solve.trace.iterations == 1);
  }

  SECTION("residual scale tracks the inner tolerance on a mid-run state") {
    ch::ChProblem chp = ch::build_problem({grid, 0.1, 1.0, 0.0});
    // drive the outer loop a few steps to get a representative state
    ch::ChSolveConfig cfg;
    cfg.k_hat = 3;
    cfg.tol_outer = 1e-14;
    spectral::TransformContext run_ctx(grid);
    auto run = ch::ch_ppgd_solve(run_ctx, chp, cfg);
    spectral::SpectralField rhs = spectral::mean_zero_project(run.solution - chp.u_star);

    const double tol_i = 1e-6;
    auto solve = elliptic::approx_inverse_operator(ctx, chp.mobility, rhs, run.solution,
                                                   core::IterationBudget(2000, tol_i));
    spectral::SpectralField residual =
        spectral::variable_laplacian(ctx, chp.mobility, solve.solution);
    residual *= -1.0;
    residual -= rhs;  // (-Lap_M) zeta - rhs
    CHECK(spectral::hminus1_norm(ctx, residual) <= 10.0 * tol_i);
  }
}
