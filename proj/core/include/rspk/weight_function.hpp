// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace rspk {

/// Robust weight u(x) = (1 + alpha) / (alpha + x) and the scalar functions
/// derived from it for a given aspect ratio c:
///
///   phi(x) = x u(x),      g(x) = x / (1 - c phi(x)),
///   v(y)   = u(g^-1(y)),  psi(y) = y v(y).
///
/// Passing c = N/n gives the finite-sample v and psi; passing the limiting
/// ratio gives v_c and psi_c. Requires 0 < c < 1 / phi_inf().
///
/// `unit()` is the constant weight u = v = 1, which turns the scatter
/// fixed point into the sample covariance and the spectral machinery into
/// its sample-covariance counterpart. It exists for baselines and tests.
class WeightFunction {
 public:
  enum class Kind { kMaronna, kUnit };

  static WeightFunction maronna(double alpha, double c);
  static WeightFunction unit(double c);

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double c() const noexcept { return c_; }

  /// Same weight family with a different aspect ratio.
  WeightFunction with_c(double c) const;

  double u(double x) const;
  double phi(double x) const;
  /// lim phi(x) as x -> infinity; infinite for the unit weight.
  double phi_inf() const noexcept;

  double g(double x) const;
  double g_inverse(double y) const;

  double v(double y) const;
  double psi(double y) const;
  /// sup psi = phi_inf / (1 - c phi_inf).
  double psi_inf() const noexcept;

 private:
  WeightFunction(Kind kind, double alpha, double c) : kind_(kind), alpha_(alpha), c_(c) {}

  Kind kind_;
  double alpha_;
  double c_;
};

/// Inverts g by monotone bisection. Works for any weight whose g is
/// increasing; used as the generic route and as an oracle for the
/// closed-form inverse.
double g_inverse_bisect(const WeightFunction& w, double y, double rel_tol = 1e-15);

}  // namespace rspk
