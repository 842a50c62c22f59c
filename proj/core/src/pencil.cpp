#include "sepwave/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sepwave/errors.hpp"

namespace sepwave::pencil {

using matrix_core::one_norm;

std::vector<Complex> gamma_ladder(std::size_t count) {
  const Complex i(0.0, 1.0);
  std::vector<Complex> ladder = {0.0, 1.0, -1.0, i, 2.0, -2.0, -i, 3.0, -3.0, 2.0 * i, -2.0 * i,
                                 0.5, -0.5, 0.5 * i, -0.5 * i};
  // Beyond the fixed prefix, spiral outwards with the golden angle so no two
  // candidates share a ray.
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t n = 1; ladder.size() < count; ++n) {
    ladder.push_back((1.0 + 0.37 * static_cast<double>(n)) * std::polar(1.0, golden_angle * static_cast<double>(n)));
  }
  ladder.resize(count);
  return ladder;
}

Complex find_gamma(const CMatrix& E, const CMatrix& A, double max_condition) {
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows()) {
    throw Error(ErrorKind::ShapeError, "find_gamma needs square E and A of equal size");
  }
  double scale = one_norm(A) / std::max(one_norm(E), 1.0);
  if (scale == 0.0) {
    scale = 1.0;
  }
  const std::size_t count = 15 + 4 * static_cast<std::size_t>(E.rows()) + 16;
  for (Complex candidate : gamma_ladder(count)) {
    const Complex gamma = candidate * scale;
    if (matrix_core::condition_one(CMatrix(gamma * E + A)) <= max_condition) {
      return gamma;
    }
  }
  throw Error(ErrorKind::NoRegularizingGamma, "gamma E + A is singular for every candidate shift");
}

PencilData build_pencil(const CMatrix& E, const CMatrix& A, Complex gamma, const Tolerances& tol) {
  if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows()) {
    throw Error(ErrorKind::ShapeError, "build_pencil needs square E and A of equal size");
  }
  const Index m = E.rows();
  const CMatrix shifted = gamma * E + A;
  PencilData pd;
  pd.gamma = gamma;
  pd.tol = tol;
  pd.shift_condition = matrix_core::condition_one(shifted);
  if (!(pd.shift_condition <= tol.max_condition)) {
    std::ostringstream msg;
    msg << "gamma E + A has condition number " << pd.shift_condition << " at gamma = " << gamma;
    throw Error(ErrorKind::SingularShift, msg.str());
  }
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  pd.Ehat = lu.solve(E);
  pd.Ahat = lu.solve(A);

  const auto cn = matrix_core::core_nilpotent(pd.Ehat, tol.rank);
  pd.index = cn.index;
  pd.T = cn.T;
  pd.T_inv = cn.T_inv;
  pd.core_dim = cn.p;

  const Index p = cn.p;
  const CMatrix c_inv = cn.C.triangularView<Eigen::Upper>().solve(CMatrix::Identity(p, p));
  pd.EhatD = cn.T.leftCols(p) * c_inv * cn.T_inv.topRows(p);
  pd.projector = pd.Ehat * pd.EhatD;
  pd.reduced = pd.EhatD * pd.Ahat;

  pd.core_reduced = c_inv - gamma * CMatrix::Identity(p, p);
  pd.core_eigen = matrix_core::diagonalize(pd.core_reduced, tol.max_condition);

  const double threshold = tol.rank * std::max(1.0, one_norm(pd.core_reduced));
  const CVector core_values = pd.core_eigen ? pd.core_eigen->values : CVector(pd.core_reduced.diagonal());
  for (Index i = 0; i < core_values.size(); ++i) {
    pd.spectrum_reduced.push_back(core_values(i));
    if (std::abs(core_values(i)) > threshold) {
      pd.nontrivial_spectrum = true;
    }
  }
  for (Index i = p; i < m; ++i) {
    pd.spectrum_reduced.emplace_back(0.0, 0.0);
  }
  std::sort(pd.spectrum_reduced.begin(), pd.spectrum_reduced.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return pd;
}

double rho_margin(const PencilData& pd, double rho) {
  const CVector values = pd.core_eigen ? pd.core_eigen->values : CVector(pd.core_reduced.diagonal());
  const double threshold = pd.tol.rank * std::max(1.0, one_norm(pd.core_reduced));
  double margin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) <= threshold) {
      continue;
    }
    const Complex rd = rho * values(i);
    margin = std::min(margin, std::abs(rd * (1.0 + 0.25 * rd)));
  }
  return margin;
}

PropagatorPair build_propagators(const PencilData& pd, double rho, RhoCheck check, int mode) {
  if (!pd.core_eigen) {
    throw Error(ErrorKind::DefectiveMatrix, "the reduced operator Ehat^D Ahat is not diagonalizable on its core");
  }
  if (check == RhoCheck::Enforce && rho_margin(pd, rho) <= pd.tol.rank) {
    std::ostringstream msg;
    msg << "rho d (1 + rho d / 4) vanishes for rho = " << rho << " (mode " << mode << ")";
    throw Error(ErrorKind::RhoDegenerate, msg.str());
  }
  const Index p = pd.core_dim;
  PropagatorPair out;
  out.mode = mode;
  out.rho = rho;
  const CMatrix plus = pd.core_eigen->apply(matrix_core::AnalyticFunction::p_plus(rho));
  const CMatrix minus = pd.core_eigen->apply(matrix_core::AnalyticFunction::p_minus(rho));
  out.Z0 = pd.T.leftCols(p) * plus * pd.T_inv.topRows(p);
  out.Z1 = pd.T.leftCols(p) * minus * pd.T_inv.topRows(p);
  return out;
}

CVector solve_matrix_difference(const PencilData& pd, const PropagatorPair& prop, const CVector& l1,
                                const CVector& l2, int j) {
  if (j < 0) {
    throw Error(ErrorKind::InvalidParameter, "solve_matrix_difference needs j >= 0");
  }
  CVector a = pd.projector * l1;
  CVector b = pd.projector * l2;
  for (int step = 0; step < j; ++step) {
    a = prop.Z0 * a;
    b = prop.Z1 * b;
  }
  return a + b;
}

CVector solve_matrix_difference(const PencilData& pd, double rho, const CVector& l1, const CVector& l2,
                                int j) {
  return solve_matrix_difference(pd, build_propagators(pd, rho), l1, l2, j);
}

CVector recurrence_residual(const PencilData& pd, double rho, const CVector& prev, const CVector& cur,
                            const CVector& next) {
  return pd.Ehat * (next + prev) - (2.0 * pd.Ehat + rho * pd.Ahat) * cur;
}

}  // namespace sepwave::pencil
