// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rspk/doa.hpp"
#include "rspk/harness/config.hpp"
#include "rspk/inference.hpp"
#include "rspk/spectrum.hpp"

namespace rspk::harness {

/// Known-nu contexts shared by all trials of a configuration.
struct KnownContexts {
  std::shared_ptr<const SpectralContext> robust;  // Maronna weight
  std::shared_ptr<const SpectralContext> sample;  // v = 1
};

/// Builds nu from the noise model (binned when quadrature_bins > 0).
TauMeasure config_measure(const ExperimentConfig& cfg);
KnownContexts build_known_contexts(const ExperimentConfig& cfg);

/// Runs body(i) for i in [0, count) on `workers` threads. The first
/// exception is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

struct SpectrumResult {
  double gamma = 0.0;
  double s_plus = 0.0;
  double support_edge = 0.0;
  double p_minus = 0.0;
  std::vector<std::optional<double>> spike_locations;  // per source power
  double sample_edge = 0.0;
  std::vector<std::optional<double>> sample_spike_locations;
  std::vector<std::size_t> trials;                    // kept trial indices
  std::vector<std::vector<double>> robust_eigenvalues;  // descending, per kept trial
  std::vector<std::vector<double>> sample_eigenvalues;
  std::size_t skipped = 0;
  std::vector<DensityPoint> density;
  std::vector<DensityPoint> sample_density;

  /// Eigenvalues of the robust estimate strictly above `level` in kept trial t.
  std::size_t count_above(std::size_t t, double level) const;
};

struct MsePoint {
  double power_db = 0.0;
  std::vector<double> mse;              // per method, rad^2
  std::vector<std::size_t> failures;    // trials with flagged spike entries
  std::size_t used = 0;
  std::size_t skipped = 0;
};

struct MseResult {
  std::vector<Method> methods;
  std::vector<MsePoint> points;

  double mse(std::size_t point, Method m) const;
};

struct OneshotResult {
  std::vector<LocalizationCurve> curves;
};

struct EstimateResult {
  Index n_antennas = 0;
  Index n_samples = 0;
  int iterations = 0;
  double gamma_hat = 0.0;
  SpikeReport report;
  std::vector<double> angles;  // radians, ascending
};

/// Output files go to `out_dir` unless it is empty.
SpectrumResult run_spectrum_histogram(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
OneshotResult run_localization_oneshot(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
MseResult run_mse_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
EstimateResult run_estimate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Squared error of the estimate closest to theta_1 for one realization.
struct TrialErrors {
  std::vector<double> sq_error;
  std::vector<bool> flagged;
};
TrialErrors localization_errors(const ExperimentConfig& cfg, const SourceConfig& sources, const KnownContexts& known,
                                const std::vector<Method>& methods, std::size_t trial);

}  // namespace rspk::harness
