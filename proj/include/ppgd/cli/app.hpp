#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ppgd/cli/orchestrate.hpp"

namespace ppgd::cli {

/// Command-line front end; tests drive this directly with argv vectors.
/// Subcommands: run, sweep, render, check.
inline int run_app(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Perturbed preconditioned gradient descent solver"};
  app.require_subcommand(1);

  std::string config_path, out_override, delta0_list, render_out = ".";
  std::vector<std::string> trace_paths;
  std::uint64_t seed = 12345;
  bool force_failure = false;

  CLI::App* run = app.add_subcommand("run", "Execute one configured solve");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--out", out_override, "Output directory (overrides config)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a delta0 sweep");
  sweep->add_option("--config", config_path, "Configuration file")->required();
  sweep->add_option("--delta0", delta0_list, "Comma-separated delta0 values")->required();

  CLI::App* render = app.add_subcommand("render", "Plot trace files");
  render->add_option("--traces", trace_paths, "Trace CSV files")->required()->expected(-1);
  render->add_option("--out", render_out, "Output directory");

  CLI::App* check = app.add_subcommand("check", "Run the verification suite");
  check->add_option("--seed", seed, "Sampling seed");
  check->add_flag("--force-failure", force_failure,
                  "Stress hook: run with an inadmissible step size");

  std::vector<const char*> argv;
  argv.push_back("ppgd");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    const int code = app.exit(e, os, os);
    (code == 0 ? out : err) << os.str();
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (run->parsed()) {
      RunConfig cfg = load_config(config_path);
      if (!out_override.empty()) cfg.out_dir = out_override;
      return cmd_run(cfg, out, err);
    }
    if (sweep->parsed()) {
      RunConfig cfg = load_config(config_path);
      std::vector<double> deltas;
      std::stringstream ss(delta0_list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        deltas.push_back(std::stod(item));
      }
      return cmd_sweep(cfg, deltas, out, err);
    }
    if (render->parsed()) return cmd_render(trace_paths, render_out, out, err);
    if (check->parsed()) return cmd_check(seed, force_failure, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace ppgd::cli
