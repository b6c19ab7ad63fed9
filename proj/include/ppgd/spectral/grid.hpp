#pragma once

#include <stdexcept>
#include <string>

namespace ppgd::spectral {

/// Uniform collocation grid on the periodic square (0, length)^2 with
/// n points per dimension. n must be a power of two (radix-2 transforms
/// and the three-halves padding rule both rely on it).
struct Grid {
  int n = 0;
  double length = 0.0;

  Grid() = default;
  Grid(int n_, double length_) : n(n_), length(length_) {
    if (n < 4 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Grid: n must be a power of two >= 4, got " +
                                  std::to_string(n));
    if (!(length > 0.0))
      throw std::invalid_argument("Grid: length must be positive");
  }

  double spacing() const { return length / n; }
  int points() const { return n * n; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n == b.n && a.length == b.length;
  }
};

}  // namespace ppgd::spectral
