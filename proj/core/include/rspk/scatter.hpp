// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "rspk/datagen.hpp"
#include "rspk/rng.hpp"
#include "rspk/types.hpp"
#include "rspk/weight_function.hpp"

namespace rspk {

struct FixedPointOptions {
  /// Stop once the relative Frobenius residual, divided by (1 - rho) for the
  /// observed contraction rate rho, is below this value.
  double tolerance = 1e-9;
  int max_iterations = 200;
  /// Starting iterate; identity when empty.
  std::optional<CMatrix> initial;
  /// Rescale each iterate so that (1/n) sum_i phi((1/N) y_i^* Z^-1 y_i) = 1,
  /// an identity every fixed point satisfies. Removes the slow scale mode
  /// of the plain iteration without moving the fixed point.
  bool rescale = true;
};

/// Robust scatter estimate C_N with its spectrum and leave-one-out
/// statistics. Immutable once built.
class ScatterEstimate {
 public:
  struct Parts {
    CMatrix matrix;
    RVector eigenvalues;    // descending
    CMatrix eigenvectors;   // columns match eigenvalues
    RVector weights;        // u((1/N) y_i^* C_N^-1 y_i)
    RVector loo_forms;      // (1/N) y_i^* C_(i)^-1 y_i
    double gamma_hat = 0.0;
    RVector tau_hat;
    double residual = 0.0;
    int iterations = 0;
    int clipped_downdates = 0;
    Index n_samples = 0;
    WeightFunction weight_function = WeightFunction::unit(0.5);
  };

  explicit ScatterEstimate(Parts parts) : p_(std::move(parts)) {}

  const CMatrix& matrix() const noexcept { return p_.matrix; }
  const RVector& eigenvalues() const noexcept { return p_.eigenvalues; }
  const CMatrix& eigenvectors() const noexcept { return p_.eigenvectors; }
  const RVector& weights() const noexcept { return p_.weights; }
  const RVector& loo_forms() const noexcept { return p_.loo_forms; }
  double gamma_hat() const noexcept { return p_.gamma_hat; }
  const RVector& tau_hat() const noexcept { return p_.tau_hat; }
  double residual() const noexcept { return p_.residual; }
  int iterations() const noexcept { return p_.iterations; }
  int clipped_downdates() const noexcept { return p_.clipped_downdates; }
  Index n_antennas() const noexcept { return p_.matrix.rows(); }
  Index n_samples() const noexcept { return p_.n_samples; }
  double aspect_ratio() const noexcept {
    return static_cast<double>(n_antennas()) / static_cast<double>(n_samples());
  }
  /// Weight function evaluated at c_n = N/n.
  const WeightFunction& weight_function() const noexcept { return p_.weight_function; }

 private:
  Parts p_;
};

/// Solves Z = (1/n) sum_i u((1/N) y_i^* Z^-1 y_i) y_i y_i^* by fixed-point
/// iteration with one Cholesky factorization per sweep. The weight family
/// is taken from `w`; its aspect ratio is reset to N/n for the stored
/// leave-one-out statistics. Throws ConvergenceError with the last
/// residual when max_iterations is exhausted.
ScatterEstimate solve_fixed_point(const SnapshotMatrix& y, const WeightFunction& w,
                                  const FixedPointOptions& options = {});

/// The fixed-point map's relative residual |Z - F(Z)|_F / |Z|_F.
double fixed_point_residual(const CMatrix& z, const SnapshotMatrix& y, const WeightFunction& w);

struct LeaveOneOut {
  RVector forms;  // (1/N) y_i^* C_(i)^-1 y_i
  int clipped = 0;
};

/// q_i = (1/N) y_i^* C_(i)^-1 y_i with C_(i) = C_N - (1/n) w_i y_i y_i^*, via
/// the Sherman-Morrison downdate. Denominators below 1e-12 are clipped and
/// counted.
LeaveOneOut leave_one_out_quadratic_forms(const ScatterEstimate& est, const SnapshotMatrix& y);

/// gamma_hat = mean of the leave-one-out forms.
double gamma_hat(const RVector& loo_forms);
/// tau_hat_i = q_i / gamma_hat.
RVector tau_hat(const RVector& loo_forms);

/// S_N = (1/n) sum_i v_c(tau_i gamma) A_i wbar_i wbar_i^* A_i^*, where the
/// noise block of wbar_i is the standard complex Gaussian g_i behind w_i.
/// `steering` is A = [sqrt(p_1) a_1, ..., sqrt(p_L) a_L].
CMatrix build_equivalent_model(const std::vector<double>& taus, const CMatrix& steering, const CMatrix& symbols,
                               const CMatrix& gaussian, const WeightFunction& w, double gamma);

/// Same with fresh symbol and noise draws.
CMatrix build_equivalent_model(const std::vector<double>& taus, const SourceConfig& sources, Index n_antennas,
                               const WeightFunction& w, double gamma, Rng& rng);

/// Writes the estimate's matrix as an RSPK1 container.
void write_scatter_rspk(std::ostream& out, const ScatterEstimate& est);

}  // namespace rspk
