// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rspk/types.hpp"

namespace rspk {

/// Eigen-pairs of a Hermitian matrix sorted by descending eigenvalue.
struct Eigenpairs {
  RVector values;
  CMatrix vectors;
};

Eigenpairs hermitian_eigen(const CMatrix& hermitian);

/// (1/n) Y Y^*.
CMatrix sample_covariance(const CMatrix& y);

/// Largest absolute eigenvalue of a Hermitian matrix.
double hermitian_spectral_norm(const CMatrix& hermitian);

}  // namespace rspk
