#include "sepwave/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sepwave/errors.hpp"

namespace sepwave::matrix_core {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::ShapeError, std::string(what) + " requires a square matrix");
  }
}

// Unitary similarity on rows/cols k, k+1 of an upper triangular R that
// exchanges R(k,k) and R(k+1,k+1). Q accumulates the transformation.
void swap_adjacent(CMatrix& r, CMatrix& q, Index k) {
  const Complex t11 = r(k, k);
  const Complex t22 = r(k + 1, k + 1);
  // eigenvector of the 2x2 block for t22
  Complex x0 = r(k, k + 1);
  Complex x1 = t22 - t11;
  const double len = std::hypot(std::abs(x0), std::abs(x1));
  if (len == 0.0) {
    return;
  }
  x0 /= len;
  x1 /= len;
  Eigen::Matrix2cd w;
  w << x0, -std::conj(x1), x1, std::conj(x0);

  r.middleRows(k, 2) = (w.adjoint() * r.middleRows(k, 2)).eval();
  r.middleCols(k, 2) = (r.middleCols(k, 2) * w).eval();
  q.middleCols(k, 2) = (q.middleCols(k, 2) * w).eval();
  r(k + 1, k) = Complex(0.0, 0.0);
  r(k, k) = t22;
  r(k + 1, k + 1) = t11;
}

}  // namespace

double one_norm(const CMatrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double one_norm(const CVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().sum(); }

double condition_one(const CMatrix& m) {
  require_square(m, "condition_one");
  if (m.size() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  Eigen::FullPivLU<CMatrix> lu(m);
  if (!lu.isInvertible()) {
    return std::numeric_limits<double>::infinity();
  }
  return one_norm(m) * one_norm(CMatrix(lu.inverse()));
}

RankKernel rank_and_kernel(const CMatrix& m, double tol) {
  RankKernel out;
  if (m.cols() == 0) {
    out.kernel = CMatrix(0, 0);
    return out;
  }
  if (m.rows() == 0) {
    out.kernel = CMatrix::Identity(m.cols(), m.cols());
    return out;
  }
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cutoff = tol * (s.size() > 0 ? s(0) : 0.0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      ++rank;
    }
  }
  out.rank = rank;
  out.kernel = svd.matrixV().rightCols(m.cols() - rank);
  return out;
}

CMatrix generalized_inverse(const CMatrix& m, double tol) {
  if (m.size() == 0) {
    return CMatrix::Zero(m.cols(), m.rows());
  }
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double cutoff = tol * s(0);
  RVector inv_s = RVector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      inv_s(i) = 1.0 / s(i);
    }
  }
  return svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
}

MitraSolution mitra_solve(const CMatrix& a, const CVector& b, double tol) {
  if (b.size() != a.rows()) {
    throw Error(ErrorKind::ShapeError, "mitra_solve: right-hand side length differs from rows(A)");
  }
  const CMatrix g = generalized_inverse(a, tol);
  MitraSolution out;
  out.particular = g * b;
  out.kernel_projector = CMatrix::Identity(a.cols(), a.cols()) - g * a;
  out.residual = one_norm(CVector(a * out.particular - b)) / (1.0 + one_norm(b));
  out.consistent = out.residual <= tol;
  return out;
}

CMatrix CoreNilpotentDecomposition::reconstruct() const {
  CMatrix block = CMatrix::Zero(p + q, p + q);
  block.topLeftCorner(p, p) = C;
  block.bottomRightCorner(q, q) = N;
  return T * block * T_inv;
}

CMatrix CoreNilpotentDecomposition::core_projector() const {
  return T.leftCols(p) * T_inv.topRows(p);
}

namespace {

// Rank of M^k once the sequence rank(M), rank(M^2), ... stops decreasing.
Index stable_power_rank(const CMatrix& m, double tol) {
  Index previous = m.rows();
  CMatrix power = m;
  for (Index k = 1; k <= m.rows(); ++k) {
    const Index rank = rank_and_kernel(power, tol).rank;
    if (rank == previous) {
      return rank;
    }
    previous = rank;
    power = (power * m).eval();
  }
  return previous;
}

}  // namespace

CoreNilpotentDecomposition core_nilpotent(const CMatrix& m, double tol) {
  require_square(m, "core_nilpotent");
  const Index n = m.rows();
  CoreNilpotentDecomposition out;
  if (n == 0) {
    return out;
  }

  Eigen::ComplexSchur<CMatrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::EigendecompositionFailure, "complex Schur iteration did not converge");
  }
  CMatrix r = schur.matrixT();
  CMatrix q = schur.matrixU();
  const double norm = one_norm(m);
  const double threshold = tol * norm;

  // Roundoff splits a k-fold zero eigenvalue of a Jordan chain to about
  // eps^(1/k), far above the modulus threshold. The rank sequence of powers
  // still sees it, so the nilpotent block takes whichever count is larger.
  Index zeros = 0;
  for (Index k = 0; k < n; ++k) {
    zeros += std::abs(r(k, k)) <= threshold ? 1 : 0;
  }
  zeros = std::max(zeros, n - stable_power_rank(m, tol));

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&r](Index a, Index b) { return std::abs(r(a, a)) < std::abs(r(b, b)); });
  std::vector<bool> nilpotent(static_cast<std::size_t>(n), false);
  for (Index k = 0; k < zeros; ++k) {
    nilpotent[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = true;
  }

  // Bubble core eigenvalues to the leading block, keeping their relative order.
  Index p = 0;
  for (Index k = 0; k < n; ++k) {
    if (!nilpotent[static_cast<std::size_t>(k)]) {
      for (Index s = k; s > p; --s) {
        swap_adjacent(r, q, s - 1);
      }
      ++p;
    }
  }
  const Index nq = n - p;

  const CMatrix r11 = r.topLeftCorner(p, p).triangularView<Eigen::Upper>();
  CMatrix r22 = r.bottomRightCorner(nq, nq).triangularView<Eigen::Upper>();
  for (Index k = 0; k < nq; ++k) {
    if (std::abs(r22(k, k)) <= threshold) {
      r22(k, k) = 0.0;
    }
  }
  const CMatrix r12 = r.topRightCorner(p, nq);

  // r11 X - X r22 = -r12, column by column (r22 upper triangular).
  CMatrix x = CMatrix::Zero(p, nq);
  for (Index j = 0; j < nq; ++j) {
    CVector rhs = -r12.col(j);
    for (Index i = 0; i < j; ++i) {
      rhs += x.col(i) * r22(i, j);
    }
    const CMatrix shifted = r11 - r22(j, j) * CMatrix::Identity(p, p);
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }

  CMatrix w = CMatrix::Identity(n, n);
  CMatrix w_inv = CMatrix::Identity(n, n);
  w.topRightCorner(p, nq) = x;
  w_inv.topRightCorner(p, nq) = -x;

  out.T = q * w;
  out.T_inv = w_inv * q.adjoint();
  out.C = r11;
  out.N = r22;
  out.p = p;
  out.q = nq;

  if (nq == 0) {
    out.index = 0;
  } else {
    CMatrix power = r22;
    int k = 1;
    const double scale = std::max(1.0, norm);
    while (one_norm(power) > tol * std::pow(scale, k) && k < nq) {
      power = (power * r22).eval();
      ++k;
    }
    out.index = k;
  }
  return out;
}

DrazinResult drazin_inverse(const CMatrix& m, double tol) {
  const CoreNilpotentDecomposition cn = core_nilpotent(m, tol);
  DrazinResult out;
  out.index = cn.index;
  if (cn.p == 0) {
    out.inverse = CMatrix::Zero(m.rows(), m.cols());
    return out;
  }
  const CMatrix c_inv = cn.C.triangularView<Eigen::Upper>().solve(CMatrix::Identity(cn.p, cn.p));
  out.inverse = cn.T.leftCols(cn.p) * c_inv * cn.T_inv.topRows(cn.p);
  return out;
}

Complex principal_sqrt(Complex z) {
  if (z.imag() == 0.0) {
    if (z.real() < 0.0) {
      return {0.0, std::sqrt(-z.real())};
    }
    return {std::sqrt(z.real()), 0.0};
  }
  return std::sqrt(z);
}

AnalyticFunction::AnalyticFunction(Kind kind, double rho, std::string name,
                                   std::function<Complex(Complex)> fn)
    : kind_(kind), rho_(rho), name_(std::move(name)), fn_(std::move(fn)) {}

AnalyticFunction AnalyticFunction::identity() {
  return {Kind::Identity, 0.0, "identity", [](Complex x) { return x; }};
}

AnalyticFunction AnalyticFunction::sqrt_principal() {
  return {Kind::SqrtPrincipal, 0.0, "sqrt_principal", [](Complex x) { return principal_sqrt(x); }};
}

AnalyticFunction AnalyticFunction::p_plus(double rho) {
  return {Kind::PPlus, rho, "p_plus", [rho](Complex x) {
            const Complex c = 1.0 + 0.5 * rho * x;
            return c + principal_sqrt(c * c - 1.0);
          }};
}

AnalyticFunction AnalyticFunction::p_minus(double rho) {
  return {Kind::PMinus, rho, "p_minus", [rho](Complex x) {
            const Complex c = 1.0 + 0.5 * rho * x;
            return c - principal_sqrt(c * c - 1.0);
          }};
}

AnalyticFunction AnalyticFunction::pointwise(std::string name, std::function<Complex(Complex)> fn) {
  return {Kind::Pointwise, 0.0, std::move(name), std::move(fn)};
}

Complex AnalyticFunction::operator()(Complex x) const { return fn_(x); }

CMatrix Eigendecomposition::apply(const AnalyticFunction& f) const {
  CVector mapped(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    mapped(i) = f(values(i));
    if (!std::isfinite(mapped(i).real()) || !std::isfinite(mapped(i).imag())) {
      throw Error(ErrorKind::DomainError, f.name() + " is not finite at an eigenvalue");
    }
  }
  return vectors * mapped.asDiagonal() * vectors_inv;
}

std::optional<Eigendecomposition> diagonalize(const CMatrix& m, double max_condition) {
  require_square(m, "diagonalize");
  Eigendecomposition out;
  if (m.rows() == 0) {
    out.values = CVector(0);
    out.vectors = CMatrix(0, 0);
    out.vectors_inv = CMatrix(0, 0);
    return out;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(m, true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::EigendecompositionFailure, "eigenvalue iteration did not converge");
  }
  Eigen::FullPivLU<CMatrix> lu(es.eigenvectors());
  if (!lu.isInvertible()) {
    return std::nullopt;
  }
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  out.vectors_inv = lu.inverse();
  if (one_norm(out.vectors) * one_norm(out.vectors_inv) > max_condition) {
    return std::nullopt;
  }
  return out;
}

CMatrix matrix_function(const CMatrix& m, const AnalyticFunction& f, double tol) {
  require_square(m, "matrix_function");
  if (f.kind() == AnalyticFunction::Kind::Identity) {
    return m;
  }
  const auto eig = diagonalize(m, 1e-2 / tol);
  if (!eig) {
    throw Error(ErrorKind::DefectiveMatrix,
                "matrix is not diagonalizable within tolerance and " + f.name() + " is not a polynomial");
  }
  return eig->apply(f);
}

std::vector<Complex> sorted_eigenvalues(const CMatrix& m) {
  require_square(m, "sorted_eigenvalues");
  std::vector<Complex> out;
  if (m.rows() == 0) {
    return out;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::EigendecompositionFailure, "eigenvalue iteration did not converge");
  }
  out.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return out;
}

double kernel_invariance_defect(const CMatrix& b, const CMatrix& a, double rank_tol) {
  require_square(a, "kernel_invariance_check");
  if (b.cols() != a.rows()) {
    throw Error(ErrorKind::ShapeError, "kernel_invariance_check: cols(B) must equal rows(A)");
  }
  const CMatrix g = generalized_inverse(b, rank_tol);
  const CMatrix complement = CMatrix::Identity(a.rows(), a.cols()) - g * b;
  const double scale = 1.0 + one_norm(a) * one_norm(b);
  return one_norm(CMatrix(b * a * complement)) / scale;
}

bool kernel_invariance_check(const CMatrix& b, const CMatrix& a, double tol) {
  return kernel_invariance_defect(b, a, 1e-10) <= tol;
}

}  // namespace sepwave::matrix_core
