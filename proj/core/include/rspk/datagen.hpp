// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rspk/rng.hpp"
#include "rspk/types.hpp"

namespace rspk {

/// Sources impinging on a uniform linear array. Angles in radians, powers
/// linear and sorted non-increasing, spacing in wavelengths.
struct SourceConfig {
  std::vector<double> angles;
  std::vector<double> powers;
  double spacing = 0.5;

  std::size_t size() const noexcept { return angles.size(); }
  void validate() const;
};

/// Law of the noise scales tau_i.
struct NoiseModel {
  enum class Kind { kGaussian, kStudentT, kOutlier };

  Kind kind = Kind::kGaussian;
  double beta = 0.0;               // Student-t degrees of freedom, > 2
  std::size_t outlier_count = 0;   // number of trailing outlier samples
  double outlier_value = 0.0;      // their tau

  static NoiseModel gaussian();
  static NoiseModel student_t(double beta);
  static NoiseModel outlier(std::size_t count, double value);

  void validate() const;
  std::string describe() const;
};

enum class SymbolLaw { kGaussian, kQpsk };

/// Complex N x n matrix of observations y_1..y_n stored column-major.
class SnapshotMatrix {
 public:
  explicit SnapshotMatrix(CMatrix data);

  Index n_antennas() const noexcept { return data_.rows(); }
  Index n_samples() const noexcept { return data_.cols(); }
  double aspect_ratio() const noexcept {
    return static_cast<double>(n_antennas()) / static_cast<double>(n_samples());
  }
  const CMatrix& data() const noexcept { return data_; }

 private:
  CMatrix data_;
};

/// a(theta)_j = N^{-1/2} exp(2 pi i d j sin(theta)), j = 0..N-1.
CVector steering_vector(double theta, Index n_antennas, double spacing);

/// A = [sqrt(p_1) a(theta_1), ..., sqrt(p_L) a(theta_L)].
CMatrix steering_matrix(const SourceConfig& sources, Index n_antennas);

/// Draws tau_1..tau_n. Gaussian noise gives tau = chi2(2N) / 2N, so it needs
/// the array size; Student-t gives t^2 (beta - 2) / beta; the outlier model
/// is deterministic with the last `outlier_count` entries set to
/// `outlier_value` and the rest to 1.
std::vector<double> sample_tau(const NoiseModel& model, std::size_t n, Index n_antennas, Rng& rng);

/// Latent draws and parameters behind a synthesized matrix.
struct GroundTruth {
  std::vector<double> taus;
  std::vector<double> angles;
  std::vector<double> powers;
  CMatrix symbols;   // L x n, s_{li}
  CMatrix gaussian;  // N x n, g_i with w_i = sqrt(N) g_i / |g_i|
};

struct Synthesis {
  SnapshotMatrix snapshots;
  GroundTruth truth;
};

/// y_i = sum_l sqrt(p_l) a(theta_l) s_li + sqrt(tau_i) w_i with w_i uniform on
/// the sphere of radius sqrt(N). Draw order: taus, symbols, noise.
Synthesis synthesize(const SourceConfig& sources, const NoiseModel& noise, Index n_antennas, Index n_samples,
                     Rng& rng, SymbolLaw symbols = SymbolLaw::kGaussian);

}  // namespace rspk
