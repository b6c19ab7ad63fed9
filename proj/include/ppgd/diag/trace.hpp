#pragma once

#include <vector>

namespace ppgd::diag {

/// One row of outer-iteration diagnostics.
struct TraceRecord {
  int outer_iter = 0;
  double residual_L_norm = 0.0;  // ||d~||_L of the outer search direction
  double energy = 0.0;           // objective at the iterate
  double energy_gap = 0.0;       // energy minus the energy at the last iterate
  int inner_iters = 0;
  long cumulative_ffts = 0;
  double wall_time_s = 0.0;
};

/// Fill energy_gap once the whole run is known.
inline void finalize_energy_gaps(std::vector<TraceRecord>& rows) {
  if (rows.empty()) return;
  const double last = rows.back().energy;
  for (auto& r : rows) r.energy_gap = r.energy - last;
}

}  // namespace ppgd::diag
