#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppgd/diag/trace.hpp"

namespace ppgd::cli {

inline std::string full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline constexpr const char* kTraceHeader =
    "outer_iter,residual_L_norm,energy,energy_gap,inner_iters,cumulative_ffts,wall_time_s";

inline void write_trace_csv(std::ostream& os, const std::vector<diag::TraceRecord>& rows) {
  os << kTraceHeader << "\n";
  for (const auto& r : rows) {
    os << r.outer_iter << ',' << full_precision(r.residual_L_norm) << ','
       << full_precision(r.energy) << ',' << full_precision(r.energy_gap) << ','
       << r.inner_iters << ',' << r.cumulative_ffts << ','
       << full_precision(r.wall_time_s) << "\n";
  }
}

inline void save_trace_csv(const std::string& path, const std::vector<diag::TraceRecord>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_trace_csv: cannot open " + path);
  write_trace_csv(os, rows);
}

inline std::vector<diag::TraceRecord> read_trace_csv(std::istream& is,
                                                     const std::string& name = "<stream>") {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw std::runtime_error("read_trace_csv: bad header in " + name);
  std::vector<diag::TraceRecord> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    diag::TraceRecord r;
    auto next = [&]() -> std::string {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("read_trace_csv: short row in " + name);
      return cell;
    };
    r.outer_iter = std::stoi(next());
    r.residual_L_norm = std::stod(next());
    r.energy = std::stod(next());
    r.energy_gap = std::stod(next());
    r.inner_iters = std::stoi(next());
    r.cumulative_ffts = std::stol(next());
    r.wall_time_s = std::stod(next());
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<diag::TraceRecord> load_trace_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_trace_csv: cannot open " + path);
  return read_trace_csv(is, path);
}

/// One sweep summary row per mobility parameter.
struct SweepRow {
  double delta0 = 0.0;
  int outer_iters = 0;
  long fft_count = 0;
  long inner_iters_total = 0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kSummaryHeader =
    "delta0,outer_iters,fft_count,inner_iters_total,wall_time_s";

inline void write_summary_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSummaryHeader << "\n";
  for (const auto& r : rows) {
    os << full_precision(r.delta0) << ',' << r.outer_iters << ',' << r.fft_count << ','
       << r.inner_iters_total << ',' << full_precision(r.wall_time_s) << "\n";
  }
}

inline void save_summary_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_summary_csv: cannot open " + path);
  write_summary_csv(os, rows);
}

inline std::vector<SweepRow> read_summary_csv(std::istream& is,
                                              const std::string& name = "<stream>") {
  std::string line;
  if (!std::getline(is, line) || line != kSummaryHeader)
    throw std::runtime_error("read_summary_csv: bad header in " + name);
  std::vector<SweepRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    SweepRow r;
    auto next = [&]() -> std::string {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("read_summary_csv: short row in " + name);
      return cell;
    };
    r.delta0 = std::stod(next());
    r.outer_iters = std::stoi(next());
    r.fft_count = std::stol(next());
    r.inner_iters_total = std::stol(next());
    r.wall_time_s = std::stod(next());
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ppgd::cli
