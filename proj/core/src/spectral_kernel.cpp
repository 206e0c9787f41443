// SPDX-License-Identifier: Apache-2.0
#include "rspk/spectral_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rspk/errors.hpp"

namespace rspk {

SpectralKernel::SpectralKernel(std::vector<double> weights, std::vector<double> b, std::vector<double> v, double c)
    : w_(std::move(weights)), b_(std::move(b)), v_(std::move(v)), c_(c) {
  if (w_.empty() || w_.size() != b_.size() || w_.size() != v_.size()) {
    throw DomainError("spectral kernel: atom arrays differ in length");
  }
  if (!(c_ > 0.0)) throw DomainError("spectral kernel: aspect ratio must be positive");
  for (std::size_t k = 0; k < b_.size(); ++k) {
    if (!(b_[k] > 0.0) || !std::isfinite(b_[k]) || !(v_[k] > 0.0) || !std::isfinite(v_[k])) {
      throw DomainError("spectral kernel: atoms must be positive and finite");
    }
  }
  b_max_ = *std::max_element(b_.begin(), b_.end());

  // curvature increases from 0 at delta = 0 to infinity at -1/b_max.
  double lo = -1.0 / b_max_;
  double hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (curvature(mid) > c_) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  delta_star_ = hi;
  edge_ = x_of_delta(delta_star_);
}

SpectralKernel SpectralKernel::from_measure(const TauMeasure& measure, const WeightFunction& w, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("spectral kernel: gamma must be positive");
  std::vector<double> b(measure.size());
  std::vector<double> v(measure.size());
  for (std::size_t k = 0; k < measure.size(); ++k) {
    const double t = measure.atoms()[k];
    v[k] = w.v(t * gamma);
    b[k] = t * v[k];
  }
  return SpectralKernel(measure.weights(), std::move(b), std::move(v), w.c());
}

double SpectralKernel::stieltjes_sum(double delta) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < b_.size(); ++k) acc += w_[k] * b_[k] / (1.0 + delta * b_[k]);
  return acc;
}

double SpectralKernel::x_of_delta(double delta) const { return stieltjes_sum(delta) - c_ / delta; }

double SpectralKernel::curvature(double delta) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < b_.size(); ++k) {
    const double r = delta * b_[k] / (1.0 + delta * b_[k]);
    acc += w_[k] * r * r;
  }
  return acc;
}

double SpectralKernel::delta(double x) const {
  if (!(x > edge_)) {
    throw DomainError("delta: x = " + std::to_string(x) + " is inside the support (edge " + std::to_string(edge_) +
                      ")");
  }
  double lo = delta_star_;
  double hi = std::max(-c_ / x, delta_star_);
  // x(delta) >= -c/delta on the branch, so -c/x is an upper bound for the root.
  while (x_of_delta(hi) < x) hi *= 0.5;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (x_of_delta(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SpectralKernel::Iterate SpectralKernel::delta_picard(double x, int max_iterations, double tolerance) const {
  Iterate out;
  out.delta = -c_ / x;
  for (int it = 1; it <= max_iterations; ++it) {
    const double next = c_ / (-x + stieltjes_sum(out.delta));
    out.iterations = it;
    const bool done = std::abs(next - out.delta) <= tolerance * std::abs(next);
    out.delta = next;
    if (!std::isfinite(next)) break;
    if (done) {
      out.converged = true;
      break;
    }
  }
  return out;
}

SpectralKernel::ComplexIterate SpectralKernel::delta_complex(cplx z, cplx start, double damping, int max_iterations,
                                                             double tolerance) const {
  ComplexIterate out;
  out.delta = start;
  for (int it = 1; it <= max_iterations; ++it) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < b_.size(); ++k) acc += w_[k] * b_[k] / (1.0 + out.delta * b_[k]);
    const cplx next = c_ / (-z + acc);
    const cplx mixed = damping * out.delta + (1.0 - damping) * next;
    out.iterations = it;
    const bool done = std::abs(mixed - out.delta) <= tolerance * std::abs(mixed);
    out.delta = mixed;
    if (done) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double SpectralKernel::power(double delta) const {
  double j = 0.0;
  for (std::size_t k = 0; k < b_.size(); ++k) j += w_[k] * v_[k] / (1.0 + delta * b_[k]);
  return -c_ / (delta * j);
}

double SpectralKernel::weight(double delta) const {
  double j = 0.0;
  double k2 = 0.0;
  for (std::size_t k = 0; k < b_.size(); ++k) {
    const double d = 1.0 + delta * b_[k];
    j += w_[k] * v_[k] / d;
    k2 += w_[k] * v_[k] / (d * d);
  }
  const double den = j * (1.0 - curvature(delta) / c_);
  if (!(den > 0.0)) {
    throw NumericalError("eigenvector weight: denominator " + std::to_string(den) + " is not positive at delta = " +
                         std::to_string(delta));
  }
  return k2 / den;
}

}  // namespace rspk
