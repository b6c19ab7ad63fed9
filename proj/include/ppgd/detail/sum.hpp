#pragma once

#include <cstddef>
#include <span>

namespace ppgd::detail {

// Pairwise (cascade) summation. All reductions in the library go through
// here so that the accumulation order is fixed: results are reproducible
// run to run and the rounding error grows like O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 32) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t mid = x.size() / 2;
  return pairwise_sum(x.first(mid)) + pairwise_sum(x.subspan(mid));
}

// Same accumulation order, but terms are produced by f(i) on the fly.
template <class F>
double pairwise_sum_indexed(std::size_t begin, std::size_t end, F&& f) {
  const std::size_t n = end - begin;
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += f(i);
    return s;
  }
  const std::size_t mid = begin + n / 2;
  return pairwise_sum_indexed(begin, mid, f) + pairwise_sum_indexed(mid, end, f);
}

}  // namespace ppgd::detail
