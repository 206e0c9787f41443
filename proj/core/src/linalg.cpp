// SPDX-License-Identifier: Apache-2.0
#include "rspk/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "rspk/errors.hpp"

namespace rspk {

Eigenpairs hermitian_eigen(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  // Eigen returns ascending order.
  Eigenpairs out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

CMatrix sample_covariance(const CMatrix& y) {
  const double inv_n = 1.0 / static_cast<double>(y.cols());
  CMatrix s = CMatrix::Zero(y.rows(), y.rows());
  s.selfadjointView<Eigen::Lower>().rankUpdate(y, inv_n);
  return s.selfadjointView<Eigen::Lower>();
}

double hermitian_spectral_norm(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace rspk
