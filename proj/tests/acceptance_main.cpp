// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expensive solver runs are shared across criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ppgd/ch/objective.hpp"
#include "ppgd/ch/problem.hpp"
#include "ppgd/ch/solve.hpp"
#include "ppgd/cli/csv.hpp"
#include "ppgd/elliptic/pgd_solver.hpp"
#include "ppgd/spectral/norms.hpp"
#include "ppgd/theory/checks.hpp"

using namespace ppgd;

namespace {

int g_failures = 0;

void report(int criterion, bool passed, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", passed ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!passed) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct TimedRun {
  ch::ChSolveResult result;
  double seconds = 0.0;
};

// Full-grid reference runs, one per delta0, shared by criteria 4-8 and 10.
TimedRun reference_run(double delta0) {
  ch::ChParams params;
  params.grid = spectral::Grid(128, 1.0);
  params.delta0 = delta0;
  const ch::ChProblem problem = ch::build_problem(params);
  spectral::TransformContext ctx(params.grid);
  const auto t0 = std::chrono::steady_clock::now();
  ch::ChSolveResult r = ch::ch_ppgd_solve(ctx, problem, ch::ChSolveConfig{});
  return {std::move(r), seconds_since(t0)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

}  // namespace

// 1. Desk-scale theory suite: dual traps, invariant set, convergence bound,
//    error-free rate; zero violations, under 30 s.
static void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = theory::run_all_checks(12345);
  bool ok = true;
  long total_violations = 0;
  for (const auto& r : reports) {
    ok &= r.passed;
    total_violations += r.violations;
  }
  const double secs = seconds_since(t0);
  ok &= secs < 30.0;
  report(1, ok,
         "theory suite: " + std::to_string(reports.size()) + " checks, " +
             std::to_string(total_violations) + " violations, " + fmt(secs) + " s");
}

// 2. Inner solver exactness: constant mobility in one iteration with unit
//    step; 16^2 variable-mobility solve matches a dense direct solve.
static void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream what;

  {
    spectral::Grid grid(128, 1.0);
    spectral::TransformContext ctx(grid);
    auto mobility = spectral::MobilityField::constant(grid, 1.0);
    spectral::SpectralField phi =
        spectral::mean_zero_project(ch::blob(grid, 0.3, 0.6));
    elliptic::EllipticProblem problem(mobility, phi);
    spectral::SpectralField u0(grid);
    spectral::SpectralField d0 =
        spectral::apply_symbol(ctx, spectral::inv_neg_laplacian_symbol(grid), phi);
    auto alpha = elliptic::optimal_step(ctx, problem, u0, d0);
    ok &= alpha.has_value() && std::abs(*alpha - 1.0) <= 1e-12;
    auto solve =
        elliptic::inner_pgd_solve(ctx, problem, u0, core::IterationBudget(100, 1e-10));
    ok &= solve.trace.iterations == 1;
    what << "alpha-1=" << fmt(alpha ? *alpha - 1.0 : 1.0)
         << ", iters=" << solve.trace.iterations;
  }
  {
    spectral::Grid grid(16, 1.0);
    spectral::TransformContext ctx(grid);
    auto mobility = spectral::MobilityField::from_samples(spectral::SpectralField::sample(
        grid, [&](double x, double) { return 2.0 + std::cos(2.0 * 3.14159265358979323846 * x); }));
    spectral::SpectralField phi = spectral::mean_zero_project(
        spectral::SpectralField::sample(grid, [&](double, double y) {
          return std::cos(2.0 * 3.14159265358979323846 * y);
        }));
    elliptic::EllipticProblem problem(mobility, phi);
    oracles::DenseVariableLaplacianInverse dense(ctx, mobility);
    spectral::SpectralField exact = dense.solve(phi);
    auto solve = elliptic::inner_pgd_solve(ctx, problem, spectral::SpectralField(grid),
                                           core::IterationBudget(2000, 1e-12));
    double err = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k)
      err = std::max(err, std::abs(solve.solution.values()[k] - exact.values()[k]));
    ok &= err <= 1e-8;
    what << ", dense-solve err=" << fmt(err);
  }
  const double secs = seconds_since(t0);
  ok &= secs < 5.0;
  report(2, ok, "inner exactness: " + what.str() + ", " + fmt(secs) + " s");
}

// 3. Inner geometric rate: contraction of the dual residual norm under the
//    conditioning bound (kappa - 1)/(kappa + 1) + 0.05.
static void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream what;
  for (double delta0 : {0.1, 0.01}) {
    ch::ChParams params;
    params.grid = spectral::Grid(128, 1.0);
    params.delta0 = delta0;
    const ch::ChProblem problem = ch::build_problem(params);
    spectral::TransformContext ctx(params.grid);
    spectral::SpectralField phi = spectral::mean_zero_project(-1.0 * problem.u_star);
    elliptic::EllipticProblem ep(problem.mobility, phi);
    auto solve = elliptic::inner_pgd_solve(ctx, ep, spectral::SpectralField(params.grid),
                                           core::IterationBudget(5000, 1e-8));
    const auto& res = solve.trace.residual_norms;
    double log_sum = 0.0;
    long count = 0;
    for (std::size_t k = 2; k < res.size(); ++k) {
      log_sum += std::log(res[k] / res[k - 1]);
      ++count;
    }
    const double rate = std::exp(log_sum / std::max<long>(count, 1));
    const double kappa = std::sqrt(1.0 + delta0 * delta0) / delta0;
    const double bound = (kappa - 1.0) / (kappa + 1.0) + 0.05;
    ok &= rate <= bound;
    what << "delta0=" << delta0 << " rate=" << fmt(rate) << " bound=" << fmt(bound) << "; ";
  }
  const double secs = seconds_since(t0);
  ok &= secs < 30.0;
  report(3, ok, "inner geometric rate: " + what.str() + fmt(secs) + " s");
}

int main() {
  criterion_1();
  criterion_2();
  criterion_3();

  // Shared full-grid runs
  TimedRun run_01 = reference_run(0.1);
  TimedRun run_001 = reference_run(0.01);
  TimedRun run_0001 = reference_run(0.001);

  // 4. Default run converges within the outer budget, comfortably under
  //    100 outer iterations and 60 s.
  {
    const bool converged = run_01.result.reason == core::StopReason::converged;
    const bool ok = converged && run_01.result.outer_iterations <= 100 &&
                    run_01.result.outer_iterations < 1000 && run_01.seconds < 60.0;
    report(4, ok,
           "default run: " + core::to_string(run_01.result.reason) + " in " +
               std::to_string(run_01.result.outer_iterations) + " outer iterations, " +
               fmt(run_01.seconds) + " s");
  }

  // 5. Residual histories overlap across mobility ratios: within 20%
  //    relative at each common outer index >= 2, counts differ by <= 5.
  {
    const auto& a = run_01.result.trace;
    const auto& b = run_0001.result.trace;
    bool ok = std::abs(static_cast<long>(run_01.result.outer_iterations) -
                       static_cast<long>(run_0001.result.outer_iterations)) <= 5;
    double worst = 0.0;
    const std::size_t common = std::min(a.size(), b.size());
    for (std::size_t k = 2; k < common; ++k) {
      const double ra = a[k].residual_L_norm, rb = b[k].residual_L_norm;
      const double rel = std::abs(ra - rb) / std::max({std::abs(ra), std::abs(rb), 1e-300});
      worst = std::max(worst, rel);
      ok &= rel <= 0.20;
    }
    report(5, ok,
           "overlap of residual histories (delta0 0.1 vs 0.001): worst rel diff " +
               fmt(worst) + ", outer iterations " +
               std::to_string(run_01.result.outer_iterations) + " vs " +
               std::to_string(run_0001.result.outer_iterations));
  }

  // 6. Inner iteration counts stay flat over the outer loop (max - min <= 3
  //    over outer indices >= 2) for each delta0.
  {
    bool ok = true;
    std::ostringstream what;
    for (const TimedRun* run : {&run_01, &run_001, &run_0001}) {
      int lo = 1 << 30, hi = 0;
      const auto& trace = run->result.trace;
      for (std::size_t k = 2; k < trace.size(); ++k) {
        lo = std::min(lo, trace[k].inner_iters);
        hi = std::max(hi, trace[k].inner_iters);
      }
      ok &= trace.size() <= 2 || hi - lo <= 3;
      what << "spread=" << (trace.size() <= 2 ? 0 : hi - lo) << " ";
    }
    report(6, ok, "inner-iteration stationarity: " + what.str());
  }

  // 7. Cost grows monotonically as delta0 decreases.
  {
    const bool ok =
        run_001.result.total_ffts >= run_01.result.total_ffts &&
        run_0001.result.total_ffts >= run_001.result.total_ffts &&
        run_001.result.total_inner_iterations >= run_01.result.total_inner_iterations &&
        run_0001.result.total_inner_iterations >= run_001.result.total_inner_iterations;
    report(7, ok,
           "cost monotone in mobility ratio: ffts " +
               std::to_string(run_01.result.total_ffts) + " <= " +
               std::to_string(run_001.result.total_ffts) + " <= " +
               std::to_string(run_0001.result.total_ffts));
  }

  // 8. Solutions are stable across mobility ratios.
  {
    spectral::SpectralField diff = run_001.result.solution - run_01.result.solution;
    const double rel = diff.sup_norm() / run_001.result.solution.sup_norm();
    report(8, rel <= 0.2,
           "solution stability: |u(0.01) - u(0.1)| / |u(0.01)| = " + fmt(rel));
  }

  // 9. Zero perturbation reduction: with near-exact inner solves and
  //    constant mobility, the perturbed run matches the exact-gradient run
  //    to 1e-12 per iterate.
  {
    ch::ChParams params;
    params.grid = spectral::Grid(64, 1.0);
    params.delta0 = 0.1;
    ch::ChProblem p = ch::build_problem_with_mobility(
        params, spectral::MobilityField::constant(params.grid, 1.0));
    ch::ChSolveConfig cfg;
    cfg.tol_inner = 1e-14;
    cfg.tol_outer = 1e-10;
    cfg.k_hat = 80;

    std::vector<spectral::SpectralField> a, b;
    spectral::TransformContext ctx1(params.grid);
    ch::ch_ppgd_solve(ctx1, p, cfg,
                      [&](int, const spectral::SpectralField& v) { a.push_back(v); });
    spectral::TransformContext ctx2(params.grid);
    ch::ch_pgd_reference_solve(
        ctx2, p, cfg, [&](int, const spectral::SpectralField& v) { b.push_back(v); });
    double worst = a.size() == b.size() ? 0.0 : 1.0;
    if (a.size() == b.size())
      for (std::size_t k = 0; k < a.size(); ++k) {
        double err = 0.0;
        for (std::size_t i = 0; i < a[k].size(); ++i)
          err = std::max(err, std::abs(a[k].values()[i] - b[k].values()[i]));
        worst = std::max(worst, err);
      }
    report(9, worst <= 1e-12,
           "zero-perturbation reduction: worst per-iterate gap " + fmt(worst));
  }

  // 10. Determinism: identical default runs give byte-identical trace CSV
  //     once the wall-time column is stripped.
  {
    TimedRun again = reference_run(0.1);
    auto strip = [](const std::vector<diag::TraceRecord>& rows) {
      std::ostringstream os;
      for (auto r : rows) {
        r.wall_time_s = 0.0;
        std::vector<diag::TraceRecord> one{r};
        cli::write_trace_csv(os, one);
      }
      return os.str();
    };
    const bool ok = strip(run_01.result.trace) == strip(again.result.trace);
    report(10, ok, std::string("determinism: trace bytes ") + (ok ? "identical" : "differ"));
  }

  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
