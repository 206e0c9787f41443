// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rspk/tau_measure.hpp"
#include "rspk/types.hpp"
#include "rspk/weight_function.hpp"

namespace rspk {

/// Atom-level form of the delta equation
///
///   delta = c / (-x + sum_k w_k b_k / (1 + delta b_k))
///
/// with b_k = t_k v(t_k gamma) and v_k = v(t_k gamma). The known-nu,
/// empirical and sample-covariance estimators differ only in the atoms.
class SpectralKernel {
 public:
  SpectralKernel(std::vector<double> weights, std::vector<double> b, std::vector<double> v, double c);

  /// b = t v(t gamma), v = v(t gamma) with the aspect ratio taken from `w`.
  static SpectralKernel from_measure(const TauMeasure& measure, const WeightFunction& w, double gamma);

  double c() const noexcept { return c_; }
  double b_max() const noexcept { return b_max_; }
  std::size_t size() const noexcept { return b_.size(); }

  /// sum w_k b_k / (1 + delta b_k).
  double stieltjes_sum(double delta) const;
  /// x(delta) = sum w_k b_k / (1 + delta b_k) - c / delta; increasing on (delta_star, 0).
  double x_of_delta(double delta) const;
  /// delta^2 sum w_k b_k^2 / (1 + delta b_k)^2.
  double curvature(double delta) const;

  /// Root of curvature(delta) = c in (-1/b_max, 0).
  double delta_star() const noexcept { return delta_star_; }
  /// Right edge of the limiting support, x(delta_star).
  double edge() const noexcept { return edge_; }

  /// Real delta(x) for x beyond the edge, by bisection. Throws DomainError
  /// when x is inside the support.
  double delta(double x) const;

  struct Iterate {
    double delta = 0.0;
    int iterations = 0;
    bool converged = false;
  };
  /// Plain fixed-point iteration from -c/x. Returns the last iterate when
  /// max_iterations is reached.
  Iterate delta_picard(double x, int max_iterations = 500, double tolerance = 1e-14) const;

  struct ComplexIterate {
    cplx delta;
    int iterations = 0;
    bool converged = false;
  };
  /// Damped iteration for complex z with Im z > 0.
  ComplexIterate delta_complex(cplx z, cplx start, double damping = 0.5, int max_iterations = 5000,
                               double tolerance = 1e-12) const;

  /// p(delta) = -c / (delta sum w_k v_k / (1 + delta b_k)).
  double power(double delta) const;
  /// sum w v/(1+delta b)^2 / (sum w v/(1+delta b) * (1 - curvature(delta)/c)).
  /// Throws NumericalError when the denominator is not positive.
  double weight(double delta) const;

 private:
  std::vector<double> w_;
  std::vector<double> b_;
  std::vector<double> v_;
  double c_;
  double b_max_ = 0.0;
  double delta_star_ = 0.0;
  double edge_ = 0.0;
};

}  // namespace rspk
