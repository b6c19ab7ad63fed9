#pragma once

#include <algorithm>
#include <stdexcept>

#include "ppgd/spectral/field.hpp"

namespace ppgd::spectral {

/// Pointwise mobility samples M(x_ij) with declared bounds m1 <= M <= m2.
/// The bounds enter step-size and conditioning estimates; they must
/// bracket the samples and m1 must be positive.
class MobilityField {
 public:
  MobilityField() = default;

  MobilityField(SpectralField samples, double m1, double m2)
      : samples_(std::move(samples)), m1_(m1), m2_(m2) {
    validate();
  }

  /// Bounds taken from the sample range itself.
  static MobilityField from_samples(SpectralField samples) {
    const auto [lo, hi] =
        std::minmax_element(samples.values().begin(), samples.values().end());
    const double m1 = *lo, m2 = *hi;
    return MobilityField(std::move(samples), m1, m2);
  }

  static MobilityField constant(Grid grid, double value) {
    SpectralField s(grid);
    for (double& v : s.values()) v = value;
    return MobilityField(std::move(s), value, value);
  }

  const SpectralField& samples() const { return samples_; }
  const Grid& grid() const { return samples_.grid(); }
  double m1() const { return m1_; }
  double m2() const { return m2_; }
  double ratio() const { return m2_ / m1_; }

  bool is_constant(double rel_tol = 1e-14) const {
    return m2_ - m1_ <= rel_tol * std::max(1.0, m2_);
  }

 private:
  void validate() const {
    if (!(m1_ > 0.0))
      throw std::domain_error("MobilityField: lower bound must be positive");
    if (m2_ < m1_) throw std::domain_error("MobilityField: bounds out of order");
    for (double v : samples_.values()) {
      if (!(v > 0.0)) throw std::domain_error("MobilityField: non-positive sample");
      if (v < m1_ * (1.0 - 1e-12) || v > m2_ * (1.0 + 1e-12))
        throw std::domain_error("MobilityField: sample outside declared bounds");
    }
  }

  SpectralField samples_;
  double m1_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace ppgd::spectral
