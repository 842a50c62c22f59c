#pragma once

#include <complex>

#include <Eigen/Dense>

namespace sepwave {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical thresholds shared by the pipeline. All values are relative.
struct Tolerances {
  /// Singular-value cutoff relative to the largest singular value, and the
  /// eigenvalue clustering threshold relative to the matrix 1-norm.
  double rank = 1e-10;
  /// Residual acceptance for the discrete equations.
  double residual = 1e-8;
  /// Consistency predicates (projector, kernel membership, invariance).
  double consistency = 1e-8;
  /// Largest 1-norm condition number accepted for a shifted pencil or an
  /// eigenvector basis.
  double max_condition = 1e8;
};

}  // namespace sepwave
