// SPDX-License-Identifier: Apache-2.0
#include "rspk/spectrum.hpp"

#include <cmath>
#include <string>

#include "rspk/errors.hpp"

namespace rspk {

namespace {

constexpr std::size_t kDensityBins = 2048;
constexpr std::size_t kDensityTail = 64;

double gamma_equation(const TauMeasure& measure, const WeightFunction& w, double gamma) {
  const double c = w.c();
  return measure.integrate([&](double t) {
    const double p = w.psi(t * gamma);
    return p / (1.0 + c * p);
  }) - 1.0;
}

}  // namespace

double solve_gamma(const TauMeasure& measure, const WeightFunction& w) {
  double lo = std::log(1e-12);
  double hi = std::log(1e12);
  const double f_lo = gamma_equation(measure, w, std::exp(lo));
  const double f_hi = gamma_equation(measure, w, std::exp(hi));
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw NumericalError("solve_gamma: no root in [1e-12, 1e12] (f = " + std::to_string(f_lo) + ", " +
                         std::to_string(f_hi) + "); invalid (nu, u, c)");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_equation(measure, w, std::exp(mid)) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

double s_plus_formula(const WeightFunction& w, double gamma) {
  const double pinf = w.phi_inf();
  const double c = w.c();
  const double r = 1.0 + std::sqrt(c);
  return pinf * r * r / (gamma * (1.0 - c * pinf));
}

SpectralContext::SpectralContext(TauMeasure measure, WeightFunction w, std::optional<double> gamma)
    : measure_(std::move(measure)),
      w_(w),
      gamma_(gamma ? *gamma : solve_gamma(measure_, w_)),
      kernel_(SpectralKernel::from_measure(measure_, w_, gamma_)),
      s_plus_(0.0),
      p_minus_(0.0) {
  if (!(gamma_ > 0.0)) throw DomainError("spectral context: gamma must be positive");
  s_plus_ = w_.kind() == WeightFunction::Kind::kUnit ? kernel_.edge() : s_plus_formula(w_, gamma_);
  const double x = s_plus_ * (1.0 + 1e-8);
  if (x > kernel_.edge()) {
    p_minus_ = kernel_.power(kernel_.delta(x));
  } else {
    // Plug-in contexts can put S+ inside the atoms' support; the edge power
    // is then the smallest detectable power.
    s_plus_inside_support_ = true;
    p_minus_ = kernel_.power(kernel_.delta_star());
  }
}

double SpectralContext::delta(double x, bool extended) const {
  if (!extended && !(x > s_plus_)) {
    throw DomainError("delta: x = " + std::to_string(x) + " is not above S+ = " + std::to_string(s_plus_));
  }
  return kernel_.delta(x);
}

namespace {

/// Root of kernel.power(delta) = p for delta in (lo, 0); power increases there.
double power_root(const SpectralKernel& kernel, double lo, double p) {
  double hi = lo;
  // Walk toward 0 until the power exceeds p; power -> inf as delta -> 0-.
  hi = lo * 0.5;
  while (kernel.power(hi) < p) hi *= 0.5;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (kernel.power(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::optional<double> SpectralContext::spike_location(double p, bool extended) const {
  if (extended) {
    if (!(p > kernel_.power(kernel_.delta_star()))) return std::nullopt;
    return solve_spike_equation(p);
  }
  if (!(p > p_minus_)) return std::nullopt;
  if (s_plus_inside_support_) return solve_spike_equation(p);
  const double lo = kernel_.delta(s_plus_ * (1.0 + 1e-8));
  return kernel_.x_of_delta(power_root(kernel_, lo, p));
}

double SpectralContext::solve_spike_equation(double p) const {
  const double lo = kernel_.delta_star();
  if (!(p > kernel_.power(lo))) {
    throw DomainError("spike equation: p = " + std::to_string(p) + " is not above the edge power " +
                      std::to_string(kernel_.power(lo)));
  }
  return kernel_.x_of_delta(power_root(kernel_, lo, p));
}

std::vector<DensityPoint> SpectralContext::limiting_density(const std::vector<double>& grid, double eps) const {
  if (!(eps > 0.0)) throw DomainError("limiting_density: eps must be positive");
  const bool big = measure_.size() > kDensityBins + kDensityTail;
  const SpectralKernel kernel =
      big ? SpectralKernel::from_measure(measure_.compressed(kDensityBins, kDensityTail), w_, gamma_) : kernel_;
  const double c = w_.c();
  std::vector<DensityPoint> out;
  out.reserve(grid.size());
  std::optional<cplx> warm;
  for (double x : grid) {
    const cplx z(x, eps);
    const cplx start = warm.value_or(-c / z);
    auto it = kernel.delta_complex(z, start);
    if (!it.converged || it.delta.imag() < 0.0) {
      // Retry from the far-field guess before flagging.
      it = kernel.delta_complex(z, -c / z);
    }
    const cplx m = (it.delta + (1.0 - c) / z) / c;
    DensityPoint pt;
    pt.x = x;
    pt.density = std::max(0.0, m.imag() / kPi);
    pt.converged = it.converged;
    out.push_back(pt);
    if (it.converged) {
      warm = it.delta;
    } else {
      warm.reset();
    }
  }
  return out;
}

}  // namespace rspk
