// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rspk/datagen.hpp"

namespace rspk {

/// Probability measure nu of the noise scales, stored as weighted atoms
/// sorted by value. Integrals are finite weighted sums.
class TauMeasure {
 public:
  enum class Kind { kDirac, kAnalytic, kEmpirical };

  static constexpr std::size_t kDefaultDraws = 1'000'000;
  static constexpr std::uint64_t kDefaultSeed = 0x5eed'7a0u;

  static TauMeasure dirac(double t0);
  /// Equal-mass atoms at the given values.
  static TauMeasure empirical(std::vector<double> values);
  /// Limiting law of a noise model. Student-t is integrated by frozen Monte
  /// Carlo with `draws` samples; the Gaussian scale chi2(2N)/2N and a
  /// finite number of outliers both tend to the Dirac mass at 1.
  static TauMeasure analytic(const NoiseModel& model, std::size_t draws = kDefaultDraws,
                             std::uint64_t seed = kDefaultSeed);
  /// General weighted atoms; weights are renormalized to sum to one.
  static TauMeasure weighted(std::vector<double> atoms, std::vector<double> weights, Kind kind);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) acc += weights_[k] * f(atoms_[k]);
    return acc;
  }

  double mean() const;
  double max() const noexcept { return atoms_.back(); }

  /// Equal-mass quantile bins replaced by their mean, keeping the largest
  /// `tail` atoms exact. Returns *this unchanged when already small enough.
  TauMeasure compressed(std::size_t bins, std::size_t tail = 256) const;

 private:
  TauMeasure(Kind kind, std::vector<double> atoms, std::vector<double> weights);

  Kind kind_;
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

}  // namespace rspk
