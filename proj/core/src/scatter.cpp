// SPDX-License-Identifier: Apache-2.0
#include "rspk/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Cholesky>

#include "rspk/errors.hpp"
#include "rspk/linalg.hpp"
#include "rspk/snapshot_io.hpp"

namespace rspk {

namespace {

/// (1/N) y_i^* Z^-1 y_i for every column, or nullopt if Z is not positive definite.
std::optional<RVector> quadratic_forms(const CMatrix& z, const CMatrix& y) {
  Eigen::LLT<CMatrix> llt(z);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const CMatrix x = llt.matrixL().solve(y);
  return RVector(x.colwise().squaredNorm().transpose() / static_cast<double>(y.rows()));
}

/// (1/n) Y diag(weights) Y^*, Hermitian by construction.
CMatrix weighted_gram(const CMatrix& y, const RVector& weights) {
  CMatrix scaled = y * weights.cwiseSqrt().asDiagonal();
  return sample_covariance(scaled);
}

RVector apply_u(const WeightFunction& w, const RVector& d) {
  RVector out(d.size());
  for (Index i = 0; i < d.size(); ++i) out(i) = w.u(d(i));
  return out;
}

/// Scale s with (1/n) sum phi(d_i / s) = 1. The left side decreases in s.
double trace_identity_scale(const WeightFunction& w, const RVector& d) {
  auto excess = [&](double s) {
    double acc = 0.0;
    for (Index i = 0; i < d.size(); ++i) acc += w.phi(d(i) / s);
    return acc / static_cast<double>(d.size()) - 1.0;
  };
  double lo = 1.0;
  double hi = 1.0;
  while (excess(lo) < 0.0) lo *= 0.5;
  while (excess(hi) > 0.0) hi *= 2.0;
  // Bisection on log s.
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

LeaveOneOut downdate_forms(const RVector& d, const RVector& weights, Index n_antennas, Index n_samples) {
  LeaveOneOut out;
  out.forms.resize(d.size());
  const double ratio = static_cast<double>(n_antennas) / static_cast<double>(n_samples);
  for (Index i = 0; i < d.size(); ++i) {
    // y^* C^-1 y = N d_i; 1 - (w_i / n) y^* C^-1 y = 1 - c_n w_i d_i.
    double den = 1.0 - ratio * weights(i) * d(i);
    if (den < 1e-12) {
      den = 1e-12;
      ++out.clipped;
    }
    out.forms(i) = d(i) / den;
  }
  return out;
}

void check_snapshots(const CMatrix& y) {
  if (y.cols() < y.rows()) {
    throw DomainError("scatter estimate needs n >= N, got N = " + std::to_string(y.rows()) +
                      ", n = " + std::to_string(y.cols()));
  }
  for (Index i = 0; i < y.cols(); ++i) {
    if (y.col(i).squaredNorm() == 0.0) {
      throw DomainError("snapshot column " + std::to_string(i) + " is zero");
    }
  }
}

}  // namespace

double fixed_point_residual(const CMatrix& z, const SnapshotMatrix& y, const WeightFunction& w) {
  const auto d = quadratic_forms(z, y.data());
  if (!d) throw NumericalError("fixed_point_residual: matrix is not positive definite");
  const CMatrix f = weighted_gram(y.data(), apply_u(w, *d));
  return (f - z).norm() / z.norm();
}

ScatterEstimate solve_fixed_point(const SnapshotMatrix& snapshots, const WeightFunction& w,
                                  const FixedPointOptions& options) {
  const CMatrix& y = snapshots.data();
  check_snapshots(y);
  const Index n_antennas = y.rows();
  const Index n_samples = y.cols();

  CMatrix z = options.initial.value_or(CMatrix::Identity(n_antennas, n_antennas));
  if (z.rows() != n_antennas || z.cols() != n_antennas) {
    throw DomainError("solve_fixed_point: initial iterate has wrong shape");
  }

  const bool rescale = options.rescale && w.kind() == WeightFunction::Kind::kMaronna;
  double residual = std::numeric_limits<double>::infinity();
  double previous = residual;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    auto d = quadratic_forms(z, y);
    if (!d) {
      throw NumericalError("solve_fixed_point: singular iterate at iteration " + std::to_string(iter));
    }
    if (rescale) {
      const double s = trace_identity_scale(w, *d);
      z *= s;
      *d /= s;
    }
    const RVector weights = apply_u(w, *d);
    CMatrix next = weighted_gram(y, weights);
    residual = (next - z).norm() / z.norm();
    // |Z - Z*| <= residual / (1 - rho) with rho estimated from the last two sweeps.
    const double rho = std::isfinite(previous) && previous > 0.0 ? std::clamp(residual / previous, 0.0, 0.999) : 0.999;
    previous = residual;
    if (residual <= options.tolerance && (residual == 0.0 || residual / (1.0 - rho) <= options.tolerance)) {
      ScatterEstimate::Parts parts;
      const WeightFunction w_n =
          w.kind() == WeightFunction::Kind::kMaronna && snapshots.aspect_ratio() * w.phi_inf() >= 1.0
              ? w
              : w.with_c(std::min(snapshots.aspect_ratio(), 1.0 - 1e-12));
      auto eig = hermitian_eigen(z);
      auto loo = downdate_forms(*d, weights, n_antennas, n_samples);
      parts.matrix = std::move(z);
      parts.eigenvalues = std::move(eig.values);
      parts.eigenvectors = std::move(eig.vectors);
      parts.weights = weights;
      parts.gamma_hat = gamma_hat(loo.forms);
      parts.tau_hat = tau_hat(loo.forms);
      parts.loo_forms = std::move(loo.forms);
      parts.clipped_downdates = loo.clipped;
      parts.residual = residual;
      parts.iterations = iter + 1;
      parts.n_samples = n_samples;
      parts.weight_function = w_n;
      return ScatterEstimate(std::move(parts));
    }
    z = std::move(next);
  }
  throw ConvergenceError("solve_fixed_point: no convergence in " + std::to_string(options.max_iterations) +
                             " iterations (residual " + std::to_string(residual) + ")",
                         residual, options.max_iterations);
}

LeaveOneOut leave_one_out_quadratic_forms(const ScatterEstimate& est, const SnapshotMatrix& y) {
  const auto d = quadratic_forms(est.matrix(), y.data());
  if (!d) throw NumericalError("leave_one_out_quadratic_forms: estimate is not positive definite");
  if (d->size() != est.weights().size()) throw DomainError("leave_one_out_quadratic_forms: sample count mismatch");
  return downdate_forms(*d, est.weights(), y.n_antennas(), y.n_samples());
}

double gamma_hat(const RVector& loo_forms) { return loo_forms.mean(); }

RVector tau_hat(const RVector& loo_forms) { return loo_forms / gamma_hat(loo_forms); }

CMatrix build_equivalent_model(const std::vector<double>& taus, const CMatrix& steering, const CMatrix& symbols,
                               const CMatrix& gaussian, const WeightFunction& w, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("build_equivalent_model: gamma must be positive");
  const Index n_samples = gaussian.cols();
  if (static_cast<Index>(taus.size()) != n_samples || symbols.cols() != n_samples ||
      steering.cols() != symbols.rows() || steering.rows() != gaussian.rows()) {
    throw DomainError("build_equivalent_model: inconsistent dimensions");
  }
  CMatrix columns = steering * symbols;
  RVector weights(n_samples);
  for (Index i = 0; i < n_samples; ++i) {
    const double tau = taus[static_cast<std::size_t>(i)];
    if (!(tau > 0.0)) throw DomainError("build_equivalent_model: taus must be positive");
    columns.col(i) += std::sqrt(tau) * gaussian.col(i);
    weights(i) = w.v(tau * gamma);
  }
  return weighted_gram(columns, weights);
}

CMatrix build_equivalent_model(const std::vector<double>& taus, const SourceConfig& sources, Index n_antennas,
                               const WeightFunction& w, double gamma, Rng& rng) {
  sources.validate();
  const auto n_samples = static_cast<Index>(taus.size());
  const auto n_sources = static_cast<Index>(sources.size());
  CMatrix symbols(n_sources, n_samples);
  for (Index i = 0; i < n_samples; ++i) {
    for (Index l = 0; l < n_sources; ++l) symbols(l, i) = complex_normal(rng);
  }
  CMatrix gaussian(n_antennas, n_samples);
  for (Index i = 0; i < n_samples; ++i) {
    for (Index j = 0; j < n_antennas; ++j) gaussian(j, i) = complex_normal(rng);
  }
  return build_equivalent_model(taus, steering_matrix(sources, n_antennas), symbols, gaussian, w, gamma);
}

void write_scatter_rspk(std::ostream& out, const ScatterEstimate& est) { write_rspk(out, est.matrix()); }

}  // namespace rspk
