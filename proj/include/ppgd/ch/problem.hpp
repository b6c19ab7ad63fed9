#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ppgd/spectral/field.hpp"
#include "ppgd/spectral/grid.hpp"
#include "ppgd/spectral/mobility.hpp"

namespace ppgd::ch {

/// Periodic bump exp(cos(2 pi (x-x0)/l) + cos(2 pi (y-y0)/l)) with global
/// maximum e^2 at (x0, y0).
inline spectral::SpectralField blob(spectral::Grid grid, double x0, double y0) {
  const double two_pi_over_l = 2.0 * std::numbers::pi / grid.length;
  return spectral::SpectralField::sample(grid, [&](double x, double y) {
    return std::exp(std::cos(two_pi_over_l * (x - x0)) + std::cos(two_pi_over_l * (y - y0)));
  });
}

enum class DataKind { blob, zero };

struct ChParams {
  spectral::Grid grid{128, 1.0};
  double delta0 = 0.1;
  double lambda = 1.0;
  double gamma = 0.0;
  DataKind f_kind = DataKind::blob;
  double f_x = 0.25, f_y = 0.25;
  DataKind ustar_kind = DataKind::blob;
  double ustar_x = 0.75, ustar_y = 0.75;
};

/// Stationary Cahn-Hilliard problem data: source f, target phase u_star
/// (mean-zero, normalized to unit sup norm), and the mobility sampled once
/// as M(u_star(x)) = sqrt((1 - u_star^2)^2 + delta0^2), which brackets it in
/// [delta0, sqrt(1 + delta0^2)].
struct ChProblem {
  spectral::Grid grid;
  spectral::SpectralField f;
  spectral::SpectralField u_star;
  spectral::MobilityField mobility;
  double delta0 = 0.0;
  double lambda = 1.0;
  double gamma = 0.0;
};

inline spectral::MobilityField mobility_from_phase(const spectral::SpectralField& u_star,
                                                   double delta0) {
  spectral::SpectralField m(u_star.grid());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double w = u_star.data()[k];
    const double a = 1.0 - w * w;
    m.data()[k] = std::sqrt(a * a + delta0 * delta0);
  }
  return spectral::MobilityField(std::move(m), delta0, std::sqrt(1.0 + delta0 * delta0));
}

inline ChProblem build_problem(const ChParams& p) {
  if (!(p.delta0 > 0.0))
    throw std::invalid_argument("build_problem: delta0 must be positive");
  if (!(p.lambda > 0.0) || p.gamma < 0.0)
    throw std::invalid_argument("build_problem: requires lambda > 0 and gamma >= 0");

  spectral::SpectralField f = p.f_kind == DataKind::blob
                                  ? blob(p.grid, p.f_x, p.f_y)
                                  : spectral::SpectralField(p.grid);

  spectral::SpectralField u_star(p.grid);
  if (p.ustar_kind == DataKind::blob) {
    u_star = spectral::mean_zero_project(blob(p.grid, p.ustar_x, p.ustar_y));
    const double sup = u_star.sup_norm();
    u_star *= 1.0 / sup;
  }

  spectral::MobilityField mobility = mobility_from_phase(u_star, p.delta0);
  return ChProblem{p.grid, std::move(f), std::move(u_star), std::move(mobility),
                   p.delta0, p.lambda, p.gamma};
}

/// Same problem data but with a caller-supplied mobility (test paths, e.g.
/// constant mobility runs).
inline ChProblem build_problem_with_mobility(const ChParams& p,
                                             spectral::MobilityField mobility) {
  ChProblem out = build_problem(p);
  if (!(mobility.grid() == p.grid))
    throw std::invalid_argument("build_problem_with_mobility: grid mismatch");
  out.mobility = std::move(mobility);
  return out;
}

}  // namespace ppgd::ch
