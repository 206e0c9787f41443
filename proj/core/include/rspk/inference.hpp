// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "rspk/datagen.hpp"
#include "rspk/scatter.hpp"
#include "rspk/spectrum.hpp"
#include "rspk/types.hpp"

namespace rspk {

enum class EstimatorMode { kKnownNu, kEmpirical };

const char* to_string(EstimatorMode mode) noexcept;

/// Plug-in context: atoms tau_hat with mass 1/n, gamma = gamma_hat and the
/// weight function at c_n. Its S+ is the empirical threshold.
SpectralContext empirical_context(const ScatterEstimate& est);

/// Sample-covariance contexts (v = 1). The known version integrates against
/// nu; the empirical one uses tau_hat_i = max(1e-6, |y_i|^2 / N).
SpectralContext gmusic_context_known(const TauMeasure& measure, double c);
SpectralContext gmusic_context_empirical(const SnapshotMatrix& y);

enum SpikeFlag : unsigned {
  kSpikeOk = 0,
  kSpikeFallbackDelta = 1u << 0,   // delta from the capped fixed-point iteration
  kSpikeBelowThreshold = 1u << 1,  // forced entry with eigenvalue under the threshold
  kSpikeInvalidWeight = 1u << 2,   // weight denominator not positive; weight set to 1
};

struct SpikeEntry {
  Index index = 0;  // 0-based eigenvalue rank
  double eigenvalue = 0.0;
  double power = 0.0;
  double weight = 0.0;
  unsigned flags = kSpikeOk;
};

struct SpikeReport {
  std::vector<SpikeEntry> spikes;
  double threshold = 0.0;
  EstimatorMode mode = EstimatorMode::kKnownNu;

  std::size_t size() const noexcept { return spikes.size(); }
  bool empty() const noexcept { return spikes.empty(); }
};

/// delta at an eigenvalue: bisection when lambda is beyond the support edge,
/// otherwise the capped fixed-point iteration (500 steps, last iterate) with
/// `fallback` set.
double resolve_delta(const SpectralContext& ctx, double lambda, bool& fallback);

/// Power estimate -c / (delta(lambda) int v / (1 + delta t v)). Requires
/// lambda > S+ of the context.
double estimate_power(double lambda, const SpectralContext& ctx);
double estimate_power_known(double lambda, const SpectralContext& ctx);
double estimate_power_empirical(double lambda, const ScatterEstimate& est);

/// Eigenvector weight w_k; NumericalError when its denominator is not positive.
double eigenvector_weight(double lambda, const SpectralContext& ctx);
double eigenvector_weight_known(double lambda, const SpectralContext& ctx);
double eigenvector_weight_empirical(double lambda, const ScatterEstimate& est);

/// Eigenvalues above threshold * (1 + margin) among the first l_max, with
/// power and weight for each.
SpikeReport detect_spikes(const RVector& eigenvalues, const SpectralContext& ctx, EstimatorMode mode, Index l_max,
                          double margin = 0.02);

/// The first `count` eigenvalues regardless of the threshold. Entries that
/// are not detectable carry flags instead of failing.
SpikeReport forced_report(const RVector& eigenvalues, const SpectralContext& ctx, EstimatorMode mode, Index count);

/// sum_{k in group} w_k (a^* u_k)(u_k^* b); group holds positions in `report`.
cplx bilinear_form_estimate(const CVector& a, const CVector& b, const std::vector<std::size_t>& group,
                            const CMatrix& eigenvectors, const SpikeReport& report);

/// One row per entry: k,eigenvalue,power,weight,flags.
void write_spike_report_csv(std::ostream& out, const SpikeReport& report);

}  // namespace rspk
