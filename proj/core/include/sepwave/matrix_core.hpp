#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sepwave/types.hpp"

/// Dense complex matrix algebra: induced 1-norms, numerical rank, the
/// Moore-Penrose generalized inverse, consistency of linear systems, the
/// core-nilpotent split and Drazin inverse, and analytic matrix functions.
namespace sepwave::matrix_core {

/// Operator norm induced by the vector 1-norm, i.e. the largest column sum of
/// entry moduli.
double one_norm(const CMatrix& m);
double one_norm(const CVector& v);

/// 1-norm condition number; +inf for singular or empty input.
double condition_one(const CMatrix& m);

struct RankKernel {
  Index rank = 0;
  /// Orthonormal columns spanning the numerical null space (cols - rank columns).
  CMatrix kernel;
};

/// Singular values above `tol * sigma_max` count towards the rank.
RankKernel rank_and_kernel(const CMatrix& m, double tol = 1e-10);

/// Moore-Penrose pseudoinverse with the same relative singular-value cutoff.
/// It satisfies M G M = M, so it is a generalized inverse in the {1}-sense.
CMatrix generalized_inverse(const CMatrix& m, double tol = 1e-10);

struct MitraSolution {
  bool consistent = false;
  /// G b, where G is the generalized inverse of A.
  CVector particular;
  /// I - G A; every solution is particular + kernel_projector * z.
  CMatrix kernel_projector;
  /// |A G b - b|_1 / (1 + |b|_1).
  double residual = 0.0;
};

/// Solvability test for A x = b: consistent iff A G b = b (to `tol`).
/// Inconsistency is reported, not thrown.
MitraSolution mitra_solve(const CMatrix& a, const CVector& b, double tol = 1e-10);

/// M = T blockdiag(C, N) T^{-1} with C invertible (p x p) and N nilpotent (q x q).
struct CoreNilpotentDecomposition {
  CMatrix T;
  CMatrix T_inv;
  CMatrix C;
  CMatrix N;
  int index = 0;
  Index p = 0;
  Index q = 0;

  CMatrix reconstruct() const;
  /// T blockdiag(I_p, 0) T^{-1}: the spectral projector onto the core.
  CMatrix core_projector() const;
};

/// Computed from a complex Schur form whose diagonal is reordered so that the
/// core eigenvalues lead, followed by a triangular Sylvester solve that
/// removes the coupling block. The nilpotent block receives the q
/// smallest-modulus eigenvalues, where q is the larger of the number of
/// eigenvalues with modulus <= `tol * |M|_1` and the nullity at which
/// rank(M^k) stops decreasing. Eigenvalues below the modulus threshold are
/// set to exact zeros.
CoreNilpotentDecomposition core_nilpotent(const CMatrix& m, double tol = 1e-10);

struct DrazinResult {
  CMatrix inverse;
  int index = 0;
};

DrazinResult drazin_inverse(const CMatrix& m, double tol = 1e-10);

/// Square root with nonnegative real part; negative reals map to the
/// positive imaginary axis regardless of the sign of a zero imaginary part.
Complex principal_sqrt(Complex z);

/// Scalar map applied to a spectrum. The named members cover the functions
/// the solver needs; `pointwise` wraps any callable.
class AnalyticFunction {
 public:
  enum class Kind { Identity, SqrtPrincipal, PPlus, PMinus, Pointwise };

  static AnalyticFunction identity();
  static AnalyticFunction sqrt_principal();
  /// x -> 1 + (rho/2) x + sqrt((1 + (rho/2) x)^2 - 1)
  static AnalyticFunction p_plus(double rho);
  /// x -> 1 + (rho/2) x - sqrt((1 + (rho/2) x)^2 - 1)
  static AnalyticFunction p_minus(double rho);
  static AnalyticFunction pointwise(std::string name, std::function<Complex(Complex)> fn);

  Complex operator()(Complex x) const;
  Kind kind() const noexcept { return kind_; }
  double rho() const noexcept { return rho_; }
  const std::string& name() const noexcept { return name_; }
  bool is_polynomial() const noexcept { return kind_ == Kind::Identity; }

 private:
  AnalyticFunction(Kind kind, double rho, std::string name, std::function<Complex(Complex)> fn);

  Kind kind_;
  double rho_ = 0.0;
  std::string name_;
  std::function<Complex(Complex)> fn_;
};

/// M = V diag(values) V^{-1}.
struct Eigendecomposition {
  CVector values;
  CMatrix vectors;
  CMatrix vectors_inv;

  CMatrix apply(const AnalyticFunction& f) const;
};

/// Returns nullopt when the eigenvector basis is numerically singular
/// (condition number above `max_condition`), i.e. M is defective.
/// Throws EigendecompositionFailure if the eigensolver does not converge.
std::optional<Eigendecomposition> diagonalize(const CMatrix& m, double max_condition = 1e8);

/// f(M) through the eigendecomposition. M counts as diagonalizable when its
/// eigenvector basis has condition number at most 0.01 / tol. The identity
/// map is returned as M itself, so it is accepted for defective input.
/// Throws DefectiveMatrix or DomainError (f non-finite on the spectrum).
CMatrix matrix_function(const CMatrix& m, const AnalyticFunction& f, double tol = 1e-10);

/// Eigenvalues sorted lexicographically by (real, imag).
std::vector<Complex> sorted_eigenvalues(const CMatrix& m);

/// True iff |B A (I - B^G B)|_1 <= tol (1 + |A|_1 |B|_1), i.e. Ker(B) is an
/// invariant subspace of A. B may be rectangular with cols(B) == rows(A).
bool kernel_invariance_check(const CMatrix& b, const CMatrix& a, double tol = 1e-10);

/// Value compared by kernel_invariance_check, already divided by its scale.
double kernel_invariance_defect(const CMatrix& b, const CMatrix& a, double rank_tol = 1e-10);

}  // namespace sepwave::matrix_core
