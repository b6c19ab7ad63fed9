#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ppgd/ch/solve.hpp"
#include "ppgd/cli/config.hpp"
#include "ppgd/cli/csv.hpp"
#include "ppgd/cli/svg_plot.hpp"
#include "ppgd/spectral/field_io.hpp"
#include "ppgd/theory/checks.hpp"

namespace ppgd::cli {

// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxIters = 2;

struct RunOutputs {
  ch::ChSolveResult result;
  std::filesystem::path dir;
};

/// Execute one configuration and write trace.csv, final_field.csv and a
/// one-row summary.csv into `dir`. Throws on configuration errors; a
/// diverged solve still flushes the partial trace before rethrowing.
inline RunOutputs execute_run(const RunConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const ch::ChProblem problem = ch::build_problem(cfg.ch_params());
  spectral::TransformContext ctx(problem.grid);
  ch::ChSolveResult result = ch::ch_ppgd_solve(ctx, problem, cfg.solve_config());

  save_trace_csv((dir / "trace.csv").string(), result.trace);
  spectral::save_field_csv((dir / "final_field.csv").string(), result.solution);
  save_summary_csv((dir / "summary.csv").string(),
                   {SweepRow{cfg.delta0, result.outer_iterations, result.total_ffts,
                             result.total_inner_iterations, result.wall_time_s}});
  return {std::move(result), dir};
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    RunOutputs r = execute_run(cfg, cfg.out_dir);
    out << "run: " << core::to_string(r.result.reason) << " after "
        << r.result.outer_iterations << " outer iterations, "
        << r.result.total_inner_iterations << " inner iterations, " << r.result.total_ffts
        << " transforms (" << r.result.wall_time_s << " s)\n"
        << "run: outputs in " << r.dir.string() << "\n";
    switch (r.result.reason) {
      case core::StopReason::converged: return kExitOk;
      case core::StopReason::max_iterations: return kExitMaxIters;
      case core::StopReason::diverged: return kExitError;
    }
    return kExitError;
  } catch (const std::exception& e) {
    err << "run: error: " << e.what() << "\n";
    return kExitError;
  }
}

inline int sweep_parallelism(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PPGD_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(std::min<std::size_t>(hw, jobs));
}

inline std::string delta0_dir_name(double delta0) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "delta0_%g", delta0);
  return buf;
}

/// Run the same configuration across a list of delta0 values (parallel up
/// to PPGD_THREADS), then write summary.csv sorted by delta0 descending.
/// Individual failures are recorded and do not stop the sweep.
inline int cmd_sweep(const RunConfig& base, const std::vector<double>& delta0s,
                     std::ostream& out, std::ostream& err) {
  if (delta0s.empty()) {
    err << "sweep: error: empty delta0 list\n";
    return kExitError;
  }
  for (double d : delta0s)
    if (!(d > 0.0)) {
      err << "sweep: error: delta0 values must be positive, got " << d << "\n";
      return kExitError;
    }

  struct Entry {
    double delta0;
    bool failed = false;
    bool max_iters = false;
    std::string message;
    SweepRow row;
  };
  std::vector<Entry> entries(delta0s.size());
  for (std::size_t i = 0; i < delta0s.size(); ++i) entries[i].delta0 = delta0s[i];

  const std::filesystem::path root = base.out_dir;
  std::filesystem::create_directories(root);

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      Entry& e = entries[i];
      RunConfig cfg = base;
      cfg.delta0 = e.delta0;
      try {
        RunOutputs r = execute_run(cfg, root / delta0_dir_name(e.delta0));
        e.row = SweepRow{e.delta0, r.result.outer_iterations, r.result.total_ffts,
                         r.result.total_inner_iterations, r.result.wall_time_s};
        e.max_iters = r.result.reason == core::StopReason::max_iterations;
        e.failed = r.result.reason == core::StopReason::diverged;
        if (e.failed) e.message = "diverged";
        std::lock_guard<std::mutex> lock(log_mutex);
        out << "sweep: delta0=" << e.delta0 << " " << core::to_string(r.result.reason)
            << " outer=" << r.result.outer_iterations
            << " inner_total=" << r.result.total_inner_iterations
            << " ffts=" << r.result.total_ffts << "\n";
      } catch (const std::exception& ex) {
        e.failed = true;
        e.message = ex.what();
        std::lock_guard<std::mutex> lock(log_mutex);
        err << "sweep: delta0=" << e.delta0 << " error: " << ex.what() << "\n";
      }
    }
  };

  const int parallelism = sweep_parallelism(entries.size());
  std::vector<std::thread> pool;
  for (int t = 1; t < parallelism; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<Entry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const Entry& a, const Entry& b) { return a.delta0 > b.delta0; });
  std::vector<SweepRow> rows;
  for (const auto& e : sorted)
    if (!e.failed) rows.push_back(e.row);
  save_summary_csv((root / "summary.csv").string(), rows);
  out << "sweep: summary in " << (root / "summary.csv").string() << "\n";

  bool any_failed = false, any_capped = false;
  for (const auto& e : entries) {
    any_failed |= e.failed;
    any_capped |= e.max_iters;
  }
  return any_failed ? kExitError : (any_capped ? kExitMaxIters : kExitOk);
}

/// Render residual decay, energy-gap decay and inner-iteration plots for a
/// set of traces, plus the plotted series as one tidy CSV.
inline int cmd_render(const std::vector<std::string>& trace_paths,
                      const std::string& out_dir, std::ostream& out, std::ostream& err) {
  if (trace_paths.empty()) {
    err << "render: error: no trace files given\n";
    return kExitError;
  }
  try {
    std::filesystem::create_directories(out_dir);
    std::vector<PlotSeries> residual, gap, inner;
    std::ofstream tidy(std::filesystem::path(out_dir) / "render_series.csv");
    tidy << "trace,series,outer_iter,value\n";
    for (const auto& path : trace_paths) {
      const auto rows = load_trace_csv(path);
      const std::string label = std::filesystem::path(path).parent_path().filename().string() +
                                "/" + std::filesystem::path(path).filename().string();
      PlotSeries r{label, {}}, g{label, {}}, n{label, {}};
      for (const auto& row : rows) {
        r.points.emplace_back(row.outer_iter, row.residual_L_norm);
        g.points.emplace_back(row.outer_iter, row.energy_gap);
        n.points.emplace_back(row.outer_iter, row.inner_iters);
        tidy << label << ",residual_L_norm," << row.outer_iter << ','
             << full_precision(row.residual_L_norm) << "\n";
        tidy << label << ",energy_gap," << row.outer_iter << ','
             << full_precision(row.energy_gap) << "\n";
        tidy << label << ",inner_iters," << row.outer_iter << ',' << row.inner_iters << "\n";
      }
      residual.push_back(std::move(r));
      gap.push_back(std::move(g));
      inner.push_back(std::move(n));
    }
    const std::filesystem::path dir = out_dir;
    write_svg_plot((dir / "residual_decay.svg").string(), "Residual norm decay",
                   "outer iteration", "residual L-norm", residual, true);
    write_svg_plot((dir / "energy_gap_decay.svg").string(), "Energy gap decay",
                   "outer iteration", "energy gap", gap, true);
    write_svg_plot((dir / "inner_iterations.svg").string(), "Inner iterations",
                   "outer iteration", "inner iterations", inner, false);
    out << "render: wrote 3 plots and render_series.csv to " << out_dir << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "render: error: " << e.what() << "\n";
    return kExitError;
  }
}

/// Run the desk-scale verification suite and print a pass/fail table.
inline int cmd_check(std::uint64_t seed, bool force_failure, std::ostream& out,
                     std::ostream& err) {
  try {
    const auto reports = theory::run_all_checks(seed, force_failure);
    std::size_t name_width = 4;
    for (const auto& r : reports) name_width = std::max(name_width, r.name.size());
    out << "seed " << seed << "\n";
    bool all_passed = true;
    for (const auto& r : reports) {
      out << (r.passed ? "PASS  " : "FAIL  ") << r.name
          << std::string(name_width - r.name.size() + 2, ' ') << "violations="
          << r.violations << "/" << r.samples << "  " << r.detail << "\n";
      all_passed &= r.passed;
    }
    out << (all_passed ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
    return all_passed ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    err << "check: error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace ppgd::cli
