#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ppgd/spectral/field.hpp"
#include "ppgd/spectral/mobility.hpp"

namespace ppgd::elliptic {

/// Variable-mobility elliptic problem (-Lap_M) u = phi on mean-zero
/// periodic fields. The mobility is referenced, not copied: one mobility
/// serves every inner solve of an outer run.
struct EllipticProblem {
  const spectral::MobilityField* mobility = nullptr;
  spectral::SpectralField rhs;

  EllipticProblem(const spectral::MobilityField& m, spectral::SpectralField rhs_field)
      : mobility(&m), rhs(std::move(rhs_field)) {
    if (!(m.grid() == rhs.grid()))
      throw std::invalid_argument("EllipticProblem: mobility/rhs grid mismatch");
    const double sup = rhs.sup_norm();
    if (std::abs(rhs.mean()) > 1e-12 * std::max(1.0, sup))
      throw std::invalid_argument("EllipticProblem: right-hand side must be mean-zero");
  }

  double m1() const { return mobility->m1(); }
  double m2() const { return mobility->m2(); }
};

/// Per-solve diagnostics of the inner PGD iteration.
struct InnerTrace {
  int iterations = 0;
  bool capped = false;     // budget exhausted before the tolerance was met
  bool diverged = false;   // non-finite value encountered
  long ffts_used = 0;
  double final_energy = 0.0;                // quadratic energy at the returned iterate
  std::vector<double> residual_norms;       // H^-1 norm of phi + Lap_M u_n
  std::vector<double> energies;             // energy per visited iterate
};

}  // namespace ppgd::elliptic
