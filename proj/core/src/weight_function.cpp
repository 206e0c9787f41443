// SPDX-License-Identifier: Apache-2.0
#include "rspk/weight_function.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rspk/errors.hpp"

namespace rspk {

namespace {

void check_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw DomainError(std::string(what) + ": argument must be nonnegative, got " + std::to_string(x));
  }
}

}  // namespace

WeightFunction WeightFunction::maronna(double alpha, double c) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("weight function: alpha must be positive, got " + std::to_string(alpha));
  }
  if (!(c > 0.0) || !(c * (1.0 + alpha) < 1.0)) {
    throw ConfigError("weight function: need 0 < c < 1/phi_inf = " + std::to_string(1.0 / (1.0 + alpha)) +
                      ", got c = " + std::to_string(c));
  }
  return WeightFunction(Kind::kMaronna, alpha, c);
}

WeightFunction WeightFunction::unit(double c) {
  if (!(c > 0.0) || !(c < 1.0)) {
    throw ConfigError("unit weight function: need 0 < c < 1, got " + std::to_string(c));
  }
  return WeightFunction(Kind::kUnit, 0.0, c);
}

WeightFunction WeightFunction::with_c(double c) const {
  return kind_ == Kind::kMaronna ? maronna(alpha_, c) : unit(c);
}

double WeightFunction::u(double x) const {
  check_nonnegative(x, "u");
  if (kind_ == Kind::kUnit) return 1.0;
  return (1.0 + alpha_) / (alpha_ + x);
}

double WeightFunction::phi(double x) const {
  check_nonnegative(x, "phi");
  if (kind_ == Kind::kUnit) return x;
  return x * (1.0 + alpha_) / (alpha_ + x);
}

double WeightFunction::phi_inf() const noexcept {
  if (kind_ == Kind::kUnit) return std::numeric_limits<double>::infinity();
  return 1.0 + alpha_;
}

double WeightFunction::g(double x) const {
  check_nonnegative(x, "g");
  if (kind_ == Kind::kUnit) return x;
  // x (alpha + x) / (alpha + x - c x (1 + alpha)), denominator > 0 since c phi_inf < 1.
  return x * (alpha_ + x) / (alpha_ + x * (1.0 - c_ * (1.0 + alpha_)));
}

double WeightFunction::g_inverse(double y) const {
  check_nonnegative(y, "g_inverse");
  if (kind_ == Kind::kUnit) return y;
  // Positive root of x^2 + (alpha - k y) x - alpha y = 0 with k = 1 - c (1 + alpha).
  const double k = 1.0 - c_ * (1.0 + alpha_);
  const double b = alpha_ - k * y;
  const double disc = std::sqrt(b * b + 4.0 * alpha_ * y);
  if (b <= 0.0) return 0.5 * (disc - b);
  return 2.0 * alpha_ * y / (b + disc);
}

double WeightFunction::v(double y) const { return u(g_inverse(y)); }

double WeightFunction::psi(double y) const { return y * v(y); }

double WeightFunction::psi_inf() const noexcept {
  if (kind_ == Kind::kUnit) return std::numeric_limits<double>::infinity();
  const double pinf = phi_inf();
  return pinf / (1.0 - c_ * pinf);
}

double g_inverse_bisect(const WeightFunction& w, double y, double rel_tol) {
  check_nonnegative(y, "g_inverse_bisect");
  if (y == 0.0) return 0.0;
  // g(x) >= x, so the root lies in [0, y].
  double lo = 0.0;
  double hi = y;
  while (w.g(hi) < y) hi *= 2.0;
  for (int it = 0; it < 400 && hi - lo > rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (w.g(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace rspk
