// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "rspk/spectral_kernel.hpp"
#include "rspk/tau_measure.hpp"
#include "rspk/weight_function.hpp"

namespace rspk {

/// gamma solving int psi_c(t gamma) / (1 + c psi_c(t gamma)) nu(dt) = 1, with
/// c taken from `w`. Bisection on log gamma over [1e-12, 1e12].
double solve_gamma(const TauMeasure& measure, const WeightFunction& w);

struct DensityPoint {
  double x = 0.0;
  double density = 0.0;
  bool converged = true;
};

/// Deterministic spectral quantities for (nu, u, c): gamma, the bound S+,
/// the support edge, delta(x), the detectability threshold p- and spike
/// locations. Immutable after construction.
///
/// With the unit weight the context describes the sample covariance: b = t,
/// v = 1 and S+ coincides with the support edge.
class SpectralContext {
 public:
  /// Solves gamma unless `gamma` is given (plug-in estimate).
  SpectralContext(TauMeasure measure, WeightFunction w, std::optional<double> gamma = std::nullopt);

  const TauMeasure& measure() const noexcept { return measure_; }
  const WeightFunction& weight_function() const noexcept { return w_; }
  const SpectralKernel& kernel() const noexcept { return kernel_; }
  double c() const noexcept { return w_.c(); }
  double gamma() const noexcept { return gamma_; }
  double s_plus() const noexcept { return s_plus_; }
  double support_edge() const noexcept { return kernel_.edge(); }
  double p_minus() const noexcept { return p_minus_; }
  /// True when S+ does not exceed the support edge (possible for plug-in gamma).
  bool s_plus_inside_support() const noexcept { return s_plus_inside_support_; }

  /// delta(x) for x > S+. With `extended`, any x beyond the support edge is
  /// accepted (debug region between the edge and S+).
  double delta(double x, bool extended = false) const;

  /// Lambda(p) in (S+, inf), or nullopt when p <= p-. With `extended` the
  /// search starts from the support edge instead of S+.
  std::optional<double> spike_location(double p, bool extended = false) const;
  /// Unconditional root of p(delta(x)) = p for x beyond the support edge.
  /// Throws DomainError when p is at or below the edge power.
  double solve_spike_equation(double p) const;

  /// f(x) = Im m(x + i eps) / pi with m = (delta + (1 - c)/z) / c. Large
  /// measures are binned first; unconverged points are flagged.
  std::vector<DensityPoint> limiting_density(const std::vector<double>& grid, double eps = 1e-3) const;

 private:
  TauMeasure measure_;
  WeightFunction w_;
  double gamma_;
  SpectralKernel kernel_;
  double s_plus_;
  double p_minus_;
  bool s_plus_inside_support_ = false;
};

/// S+ = phi_inf (1 + sqrt c)^2 / (gamma (1 - c phi_inf)).
double s_plus_formula(const WeightFunction& w, double gamma);

}  // namespace rspk
