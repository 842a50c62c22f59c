#pragma once

#include <vector>

#include "sepwave/types.hpp"

/// Discrete Sturm-Liouville problems on the grid 0..N:
///
///   -p(i-1) u(i-1) + s(i) u(i) - p(i) u(i+1) = lambda r(i) u(i),  0 < i < N,
///   s(i) = p(i) + p(i-1) - q(i),
///
/// closed by the scaled forward-difference boundary relations
///
///   u(0) + alpha N (u(1) - u(0)) = 0,   u(N) + beta N (u(N) - u(N-1)) = 0.
///
/// Eliminating u(0) and u(N) leaves an (N-1) x (N-1) symmetric tridiagonal
/// generalized eigenproblem S v = lambda Rm v.
namespace sepwave::sturm_liouville {

struct SLProblem {
  int N = 2;
  double alpha = 0.0;
  double beta = 0.0;
  /// p(i) for 0 <= i <= N-1, all > 0.
  RVector p;
  /// q(i) for 0 < i < N, stored at q[i-1].
  RVector q;
  /// r(i) for 0 < i < N, stored at r[i-1], all > 0.
  RVector r;

  /// The wave-equation case p = 1, q = 0, r = 1.
  static SLProblem canonical(int N, double alpha, double beta);

  /// Throws InvalidParameter / DegenerateBoundary.
  void validate() const;

  /// u(0) = left_factor() * u(1).
  double left_factor() const;
  /// u(N) = right_factor() * u(N-1).
  double right_factor() const;
};

struct SLPencil {
  RMatrix S;
  RMatrix Rm;
};

struct EigenPair {
  double lambda = 0.0;
  /// v(i) for 0 < i < N, stored at v[i-1]; normalized to sum r v^2 = 1 with
  /// its largest-magnitude entry positive.
  RVector v;
  double v_left = 0.0;   ///< v(0) from the left boundary relation
  double v_right = 0.0;  ///< v(N) from the right boundary relation

  /// v(0), ..., v(N).
  RVector extended() const;
};

SLPencil assemble_pencil(const SLProblem& prob);

/// Exactly N-1 eigenpairs, ascending in lambda.
std::vector<EigenPair> solve_psd(const SLProblem& prob);

/// max over distinct pairs of |sum r v_a v_b| / (|v_a|_r |v_b|_r).
double orthogonality_defect(const std::vector<EigenPair>& pairs, const SLProblem& prob);

/// c_l = sum r v_l u / sum r v_l^2 for an interior grid function u.
CVector expand(const CVector& u, const std::vector<EigenPair>& pairs, const SLProblem& prob);
/// Componentwise expansion of an (N-1) x m grid of vectors; row l of the
/// result is the coefficient vector of mode l.
CMatrix expand(const CMatrix& u, const std::vector<EigenPair>& pairs, const SLProblem& prob);

/// sum_l c_l v_l on interior nodes.
CVector synthesize(const CVector& coefficients, const std::vector<EigenPair>& pairs);
CMatrix synthesize(const CMatrix& coefficients, const std::vector<EigenPair>& pairs);

/// H(i) = v(i) R for 0 <= i <= N, returned as (N+1) x m with row i = H(i)^T.
/// Throws ZeroVector when R = 0.
CMatrix lift_mode(const EigenPair& pair, const CVector& R);

}  // namespace sepwave::sturm_liouville
