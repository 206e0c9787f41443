// SPDX-License-Identifier: Apache-2.0
#include "rspk/inference.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "rspk/errors.hpp"

namespace rspk {

namespace {

constexpr int kFallbackIterations = 500;

void require_above(double lambda, const SpectralContext& ctx, const char* what) {
  if (!(lambda > ctx.s_plus())) {
    throw DomainError(std::string(what) + ": eigenvalue " + std::to_string(lambda) + " is not above S+ = " +
                      std::to_string(ctx.s_plus()));
  }
}

SpikeEntry make_entry(const RVector& eigenvalues, Index k, const SpectralContext& ctx) {
  SpikeEntry e;
  e.index = k;
  e.eigenvalue = eigenvalues(k);
  if (!(e.eigenvalue > ctx.s_plus())) e.flags |= kSpikeBelowThreshold;
  bool fallback = false;
  const double delta = resolve_delta(ctx, e.eigenvalue, fallback);
  if (fallback) e.flags |= kSpikeFallbackDelta;
  e.power = ctx.kernel().power(delta);
  try {
    e.weight = ctx.kernel().weight(delta);
    if (!std::isfinite(e.weight)) throw NumericalError("non-finite weight");
  } catch (const NumericalError&) {
    e.weight = 1.0;
    e.flags |= kSpikeInvalidWeight;
  }
  return e;
}

}  // namespace

const char* to_string(EstimatorMode mode) noexcept {
  return mode == EstimatorMode::kKnownNu ? "known-nu" : "empirical";
}

SpectralContext empirical_context(const ScatterEstimate& est) {
  std::vector<double> taus(est.tau_hat().data(), est.tau_hat().data() + est.tau_hat().size());
  return SpectralContext(TauMeasure::empirical(std::move(taus)), est.weight_function(), est.gamma_hat());
}

SpectralContext gmusic_context_known(const TauMeasure& measure, double c) {
  return SpectralContext(measure, WeightFunction::unit(c));
}

SpectralContext gmusic_context_empirical(const SnapshotMatrix& y) {
  const double n_antennas = static_cast<double>(y.n_antennas());
  std::vector<double> taus(static_cast<std::size_t>(y.n_samples()));
  for (Index i = 0; i < y.n_samples(); ++i) {
    taus[static_cast<std::size_t>(i)] = std::max(1e-6, y.data().col(i).squaredNorm() / n_antennas);
  }
  return SpectralContext(TauMeasure::empirical(std::move(taus)), WeightFunction::unit(y.aspect_ratio()));
}

double resolve_delta(const SpectralContext& ctx, double lambda, bool& fallback) {
  fallback = false;
  if (lambda > ctx.support_edge()) return ctx.kernel().delta(lambda);
  fallback = true;
  return ctx.kernel().delta_picard(lambda, kFallbackIterations).delta;
}

double estimate_power(double lambda, const SpectralContext& ctx) {
  require_above(lambda, ctx, "estimate_power");
  bool fallback = false;
  return ctx.kernel().power(resolve_delta(ctx, lambda, fallback));
}

double estimate_power_known(double lambda, const SpectralContext& ctx) { return estimate_power(lambda, ctx); }

double estimate_power_empirical(double lambda, const ScatterEstimate& est) {
  return estimate_power(lambda, empirical_context(est));
}

double eigenvector_weight(double lambda, const SpectralContext& ctx) {
  require_above(lambda, ctx, "eigenvector_weight");
  bool fallback = false;
  const double delta = resolve_delta(ctx, lambda, fallback);
  try {
    return ctx.kernel().weight(delta);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("eigenvector weight past validity at eigenvalue ") + std::to_string(lambda) +
                         ": " + e.what());
  }
}

double eigenvector_weight_known(double lambda, const SpectralContext& ctx) {
  return eigenvector_weight(lambda, ctx);
}

double eigenvector_weight_empirical(double lambda, const ScatterEstimate& est) {
  return eigenvector_weight(lambda, empirical_context(est));
}

SpikeReport detect_spikes(const RVector& eigenvalues, const SpectralContext& ctx, EstimatorMode mode, Index l_max,
                          double margin) {
  SpikeReport report;
  report.mode = mode;
  report.threshold = ctx.s_plus();
  const double cut = ctx.s_plus() * (1.0 + margin);
  const Index limit = std::min<Index>(l_max, eigenvalues.size());
  for (Index k = 0; k < limit && eigenvalues(k) > cut; ++k) {
    report.spikes.push_back(make_entry(eigenvalues, k, ctx));
  }
  return report;
}

SpikeReport forced_report(const RVector& eigenvalues, const SpectralContext& ctx, EstimatorMode mode, Index count) {
  SpikeReport report;
  report.mode = mode;
  report.threshold = ctx.s_plus();
  const Index limit = std::min<Index>(count, eigenvalues.size());
  for (Index k = 0; k < limit; ++k) report.spikes.push_back(make_entry(eigenvalues, k, ctx));
  return report;
}

cplx bilinear_form_estimate(const CVector& a, const CVector& b, const std::vector<std::size_t>& group,
                            const CMatrix& eigenvectors, const SpikeReport& report) {
  if (group.empty()) throw DomainError("bilinear_form_estimate: empty group");
  cplx acc = 0.0;
  for (std::size_t g : group) {
    if (g >= report.spikes.size()) throw DomainError("bilinear_form_estimate: group index out of range");
    const SpikeEntry& e = report.spikes[g];
    const auto u = eigenvectors.col(e.index);
    // Eigen's dot conjugates its left operand: a.dot(u) = a^* u.
    acc += e.weight * a.dot(u) * u.dot(b);
  }
  return acc;
}

void write_spike_report_csv(std::ostream& out, const SpikeReport& report) {
  out << "k,eigenvalue,power,weight,flags\n";
  out << std::setprecision(17);
  for (const auto& e : report.spikes) {
    out << e.index + 1 << ',' << e.eigenvalue << ',' << e.power << ',' << e.weight << ',' << e.flags << '\n';
  }
}

}  // namespace rspk
