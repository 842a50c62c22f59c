#include "sepwave/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "sepwave/errors.hpp"

namespace sepwave::sturm_liouville {

namespace {

constexpr double kDegenerateBoundary = 1e-12;
constexpr double kClusterGap = 1e-8;

Index argmax_abs(const RVector& v) {
  Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  return idx;
}

double weighted_norm(const RVector& v, const RVector& r) {
  return std::sqrt((r.array() * v.array().square()).sum());
}

}  // namespace

SLProblem SLProblem::canonical(int N, double alpha, double beta) {
  SLProblem prob;
  prob.N = N;
  prob.alpha = alpha;
  prob.beta = beta;
  const Index n = std::max(N, 2);
  prob.p = RVector::Ones(n);
  prob.q = RVector::Zero(n - 1);
  prob.r = RVector::Ones(n - 1);
  return prob;
}

void SLProblem::validate() const {
  if (N < 2) {
    throw Error(ErrorKind::InvalidParameter, "Sturm-Liouville problem needs N >= 2, got " + std::to_string(N));
  }
  if (p.size() != N || q.size() != N - 1 || r.size() != N - 1) {
    throw Error(ErrorKind::ShapeError, "Sturm-Liouville coefficient lengths must be N, N-1, N-1");
  }
  if ((p.array() <= 0.0).any() || (r.array() <= 0.0).any()) {
    throw Error(ErrorKind::InvalidParameter, "Sturm-Liouville p and r must be positive");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !p.allFinite() || !q.allFinite() || !r.allFinite()) {
    throw Error(ErrorKind::NonFiniteValue, "Sturm-Liouville coefficients must be finite");
  }
  if (std::abs(1.0 - alpha * N) < kDegenerateBoundary) {
    throw Error(ErrorKind::DegenerateBoundary, "1 - alpha N vanishes (alpha = " + std::to_string(alpha) + ")");
  }
  if (std::abs(1.0 + beta * N) < kDegenerateBoundary) {
    throw Error(ErrorKind::DegenerateBoundary, "1 + beta N vanishes (beta = " + std::to_string(beta) + ")");
  }
}

double SLProblem::left_factor() const { return alpha * N / (alpha * N - 1.0); }

double SLProblem::right_factor() const { return beta * N / (1.0 + beta * N); }

RVector EigenPair::extended() const {
  RVector out(v.size() + 2);
  out(0) = v_left;
  out.segment(1, v.size()) = v;
  out(v.size() + 1) = v_right;
  return out;
}

SLPencil assemble_pencil(const SLProblem& prob) {
  prob.validate();
  const int n = prob.N - 1;
  SLPencil out;
  out.S = RMatrix::Zero(n, n);
  out.Rm = RMatrix::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    out.S(i - 1, i - 1) = prob.p(i) + prob.p(i - 1) - prob.q(i - 1);
    out.Rm(i - 1, i - 1) = prob.r(i - 1);
    if (i < n) {
      out.S(i - 1, i) = -prob.p(i);
      out.S(i, i - 1) = -prob.p(i);
    }
  }
  out.S(0, 0) -= prob.p(0) * prob.left_factor();
  out.S(n - 1, n - 1) -= prob.p(prob.N - 1) * prob.right_factor();
  return out;
}

std::vector<EigenPair> solve_psd(const SLProblem& prob) {
  const SLPencil pencil = assemble_pencil(prob);
  const Index n = pencil.S.rows();

  // Symmetric similarity Rm^{-1/2} S Rm^{-1/2} keeps the tridiagonal form.
  const RVector inv_sqrt_r = prob.r.cwiseSqrt().cwiseInverse();
  RVector diag(n);
  RVector sub(std::max<Index>(n - 1, 0));
  for (Index i = 0; i < n; ++i) {
    diag(i) = pencil.S(i, i) * inv_sqrt_r(i) * inv_sqrt_r(i);
    if (i + 1 < n) {
      sub(i) = pencil.S(i + 1, i) * inv_sqrt_r(i) * inv_sqrt_r(i + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::EigendecompositionFailure, "tridiagonal eigensolver did not converge");
  }

  std::vector<EigenPair> pairs(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    EigenPair& pair = pairs[static_cast<std::size_t>(l)];
    pair.lambda = es.eigenvalues()(l);
    pair.v = inv_sqrt_r.asDiagonal() * es.eigenvectors().col(l);
    pair.v /= weighted_norm(pair.v, prob.r);
    if (pair.v(argmax_abs(pair.v)) < 0.0) {
      pair.v = -pair.v;
    }
  }

  // Within numerically repeated clusters order by position of the dominant entry.
  for (std::size_t start = 0; start < pairs.size();) {
    std::size_t end = start + 1;
    while (end < pairs.size() &&
           std::abs(pairs[end].lambda - pairs[start].lambda) <=
               kClusterGap * std::max(1.0, std::abs(pairs[start].lambda))) {
      ++end;
    }
    if (end - start > 1) {
      std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(start),
                       pairs.begin() + static_cast<std::ptrdiff_t>(end),
                       [](const EigenPair& a, const EigenPair& b) { return argmax_abs(a.v) < argmax_abs(b.v); });
    }
    start = end;
  }

  const double s_norm = pencil.S.cwiseAbs().colwise().sum().maxCoeff();
  for (EigenPair& pair : pairs) {
    const RVector res = pencil.S * pair.v - pair.lambda * (pencil.Rm * pair.v);
    if (res.cwiseAbs().sum() > 1e-10 * std::max(s_norm, 1.0) * pair.v.cwiseAbs().sum()) {
      throw Error(ErrorKind::EigendecompositionFailure, "Sturm-Liouville eigenpair residual too large");
    }
    pair.v_left = prob.left_factor() * pair.v(0);
    pair.v_right = prob.right_factor() * pair.v(n - 1);
  }
  return pairs;
}

double orthogonality_defect(const std::vector<EigenPair>& pairs, const SLProblem& prob) {
  double defect = 0.0;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    const double na = weighted_norm(pairs[a].v, prob.r);
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const double nb = weighted_norm(pairs[b].v, prob.r);
      const double inner = (prob.r.array() * pairs[a].v.array() * pairs[b].v.array()).sum();
      defect = std::max(defect, std::abs(inner) / (na * nb));
    }
  }
  return defect;
}

CMatrix expand(const CMatrix& u, const std::vector<EigenPair>& pairs, const SLProblem& prob) {
  const Index n = static_cast<Index>(pairs.size());
  if (u.rows() != prob.N - 1 || n != prob.N - 1) {
    throw Error(ErrorKind::ShapeError, "expand needs N-1 interior values and N-1 eigenpairs");
  }
  CMatrix coeffs(n, u.cols());
  for (Index l = 0; l < n; ++l) {
    const RVector& v = pairs[static_cast<std::size_t>(l)].v;
    const RVector w = prob.r.cwiseProduct(v);
    const double denom = w.dot(v);
    coeffs.row(l) = (w.cast<Complex>().transpose() * u) / denom;
  }
  return coeffs;
}

CVector expand(const CVector& u, const std::vector<EigenPair>& pairs, const SLProblem& prob) {
  return expand(CMatrix(u), pairs, prob).col(0);
}

CMatrix synthesize(const CMatrix& coefficients, const std::vector<EigenPair>& pairs) {
  if (pairs.empty()) {
    return CMatrix(0, coefficients.cols());
  }
  const Index n = pairs.front().v.size();
  CMatrix u = CMatrix::Zero(n, coefficients.cols());
  for (Index l = 0; l < static_cast<Index>(pairs.size()); ++l) {
    u += pairs[static_cast<std::size_t>(l)].v.cast<Complex>() * coefficients.row(l);
  }
  return u;
}

CVector synthesize(const CVector& coefficients, const std::vector<EigenPair>& pairs) {
  return synthesize(CMatrix(coefficients), pairs).col(0);
}

CMatrix lift_mode(const EigenPair& pair, const CVector& R) {
  if (R.size() == 0 || R.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::ZeroVector, "lift_mode needs a nonzero direction vector");
  }
  return pair.extended().cast<Complex>() * R.transpose();
}

}  // namespace sepwave::sturm_liouville
