#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ppgd::core {

/// Quantity tested against the tolerance each iteration.
enum class StopMetric {
  increment_sup_norm,    // ||step * direction||_inf
  residual_precond_norm  // ||gradient||_{L^{-1}} = ||direction||_L
};

enum class StopReason { converged, max_iterations, diverged };

inline std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::max_iterations: return "max-iters";
    case StopReason::diverged: return "diverged";
  }
  return "unknown";
}

struct IterationBudget {
  int max_iters = 1000;
  double tolerance = 1e-6;
  StopMetric metric = StopMetric::increment_sup_norm;

  IterationBudget() = default;
  IterationBudget(int max_iters_, double tolerance_,
                  StopMetric metric_ = StopMetric::increment_sup_norm)
      : max_iters(max_iters_), tolerance(tolerance_), metric(metric_) {
    if (max_iters < 1) throw std::invalid_argument("IterationBudget: max_iters must be >= 1");
    if (!(tolerance > 0.0))
      throw std::invalid_argument("IterationBudget: tolerance must be positive");
  }
};

struct StepPolicy {
  enum class Kind { fixed, exact_line_search };
  Kind kind = Kind::fixed;
  double sigma = 1.0;

  static StepPolicy fixed(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("StepPolicy: fixed step must be positive");
    return {Kind::fixed, sigma};
  }
  static StepPolicy exact_line_search() { return {Kind::exact_line_search, 0.0}; }
};

/// Outcome of a descent run. On divergence `iterate` holds the last finite
/// iterate, so callers keep everything computed up to the failure.
template <class V>
struct DescentResult {
  V iterate;
  StopReason reason = StopReason::converged;
  int iterations = 0;                  // number of applied updates
  std::vector<double> residual_norms;  // ||grad||_{L^{-1}} per visited iterate
};

}  // namespace ppgd::core
