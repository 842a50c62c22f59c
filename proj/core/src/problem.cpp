#include "sepwave/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sepwave/errors.hpp"

namespace sepwave {

namespace {

void check_matrix(const char* name, const CMatrix& mat, Index m) {
  if (mat.rows() != m || mat.cols() != m) {
    throw Error(ErrorKind::ShapeError, std::string(name) + " must be " + std::to_string(m) + "x" +
                                           std::to_string(m) + ", got " + std::to_string(mat.rows()) + "x" +
                                           std::to_string(mat.cols()));
  }
  if (!mat.allFinite()) {
    throw Error(ErrorKind::NonFiniteValue, std::string(name) + " has non-finite entries");
  }
}

void check_grid_function(const char* name, const std::vector<CVector>& values, int N, Index m) {
  if (static_cast<int>(values.size()) != N + 1) {
    throw Error(ErrorKind::ShapeError, std::string(name) + " must have N+1 = " + std::to_string(N + 1) +
                                           " entries, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != m) {
      throw Error(ErrorKind::ShapeError, std::string(name) + "[" + std::to_string(i) + "] must have length " +
                                             std::to_string(m));
    }
    if (!values[i].allFinite()) {
      throw Error(ErrorKind::NonFiniteValue, std::string(name) + "[" + std::to_string(i) + "] is not finite");
    }
  }
}

double max_norm(const std::vector<CVector>& values) {
  double out = 0.0;
  for (const CVector& v : values) {
    out = std::max(out, v.cwiseAbs().sum());
  }
  return out;
}

}  // namespace

GridParams make_grid(int N, double k, double T) {
  if (N < 2) {
    throw Error(ErrorKind::InvalidParameter, "N must be >= 2, got " + std::to_string(N));
  }
  if (!std::isfinite(k) || !std::isfinite(T)) {
    throw Error(ErrorKind::NonFiniteValue, "k and T must be finite");
  }
  if (k <= 0.0 || T <= 0.0) {
    throw Error(ErrorKind::InvalidParameter, "k and T must be positive");
  }
  const double steps = T / k;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 || rounded < 1.0 || rounded > 1e7) {
    throw Error(ErrorKind::InvalidParameter, "T / k = " + std::to_string(steps) + " is not a whole number of steps");
  }
  return GridParams{N, k, T, static_cast<int>(rounded)};
}

void ProblemSpec::validate() const {
  if (m < 1) {
    throw Error(ErrorKind::InvalidParameter, "m must be >= 1");
  }
  check_matrix("E", E, m);
  check_matrix("A", A, m);
  check_matrix("A1", A1, m);
  check_matrix("A2", A2, m);
  check_matrix("B1", B1, m);
  check_matrix("B2", B2, m);
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw Error(ErrorKind::NonFiniteValue, "alpha and beta must be finite");
  }
  const GridParams checked = make_grid(grid.N, grid.k, grid.T);
  if (checked.M != grid.M) {
    throw Error(ErrorKind::InvalidParameter, "grid.M disagrees with T / k");
  }
  check_grid_function("F", F, grid.N, m);
  check_grid_function("G", G, grid.N, m);
  if (gamma && !(std::isfinite(gamma->real()) && std::isfinite(gamma->imag()))) {
    throw Error(ErrorKind::NonFiniteValue, "gamma must be finite");
  }
  if (rho_override) {
    if (static_cast<int>(rho_override->size()) != grid.N - 1) {
      throw Error(ErrorKind::ShapeError, "rho_override must have N-1 = " + std::to_string(grid.N - 1) + " entries");
    }
    for (double rho : *rho_override) {
      if (!std::isfinite(rho)) {
        throw Error(ErrorKind::NonFiniteValue, "rho_override entries must be finite");
      }
    }
  }
  if (!(tol.rank > 0.0 && tol.residual > 0.0 && tol.consistency > 0.0 && tol.max_condition > 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "tolerances must be positive and max_condition > 1");
  }
}

double ProblemSpec::normalizer() const { return 1.0 + std::max(max_norm(F), grid.k * max_norm(G)); }

SolutionGrid::SolutionGrid(int N, int M, Index m)
    : N_(N), M_(M), m_(m), data_(CMatrix::Zero(m, static_cast<Index>(N + 1) * (M + 1))) {}

double SolutionGrid::sup_norm() const {
  if (data_.size() == 0) {
    return 0.0;
  }
  return data_.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace sepwave
