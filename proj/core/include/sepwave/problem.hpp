#pragma once

#include <optional>
#include <vector>

#include "sepwave/types.hpp"

namespace sepwave {

/// Uniform grid on [0, 1] x [0, T]: h = 1/N, M = T/k steps.
struct GridParams {
  int N = 2;
  double k = 0.0;
  double T = 0.0;
  int M = 0;

  double h() const { return 1.0 / N; }
  /// Courant ratio k / h.
  double r() const { return k * N; }
  double x(int i) const { return static_cast<double>(i) / N; }
  double t(int j) const { return j * k; }
};

/// Throws InvalidParameter unless N >= 2, k, T > 0 and T / k lies within
/// 1e-9 of an integer.
GridParams make_grid(int N, double k, double T);

/// E u_tt = A u_xx on the grid, with boundary relations
///
///   A1 U(0,j) + N A2 (U(1,j) - U(0,j)) = 0,
///   B1 U(N,j) + N B2 (U(N,j) - U(N-1,j)) = 0,
///
/// initial displacement U(i,0) = F(i) and velocity (U(i,1) - U(i,0)) / k = G(i).
struct ProblemSpec {
  Index m = 0;
  CMatrix E;
  CMatrix A;
  CMatrix A1;
  CMatrix A2;
  CMatrix B1;
  CMatrix B2;
  double alpha = 0.0;
  double beta = 0.0;
  GridParams grid;
  std::vector<CVector> F;  ///< i = 0..N
  std::vector<CVector> G;  ///< i = 0..N
  std::optional<Complex> gamma;
  /// Replaces rho_l = -r^2 lambda_l, one value per mode.
  std::optional<std::vector<double>> rho_override;
  Tolerances tol;

  /// Throws ShapeError / NonFiniteValue / InvalidParameter.
  void validate() const;

  /// 1 + max(max_i |F(i)|_1, k max_i |G(i)|_1).
  double normalizer() const;
};

/// U(i,j) in C^m for 0 <= i <= N, 0 <= j <= M, stored node by node.
class SolutionGrid {
 public:
  SolutionGrid() = default;
  SolutionGrid(int N, int M, Index m);

  int N() const { return N_; }
  int M() const { return M_; }
  Index m() const { return m_; }

  auto node(int i, int j) { return data_.col(offset(i, j)); }
  auto node(int i, int j) const { return data_.col(offset(i, j)); }
  void set(int i, int j, const CVector& value) { data_.col(offset(i, j)) = value; }

  /// m x (N+1)(M+1); column j (N+1) + i holds U(i,j).
  const CMatrix& data() const { return data_; }
  CMatrix& data() { return data_; }

  /// max over nodes of |U(i,j)|_1.
  double sup_norm() const;
  bool all_finite() const { return data_.allFinite(); }

 private:
  Index offset(int i, int j) const { return static_cast<Index>(j) * (N_ + 1) + i; }

  int N_ = 0;
  int M_ = 0;
  Index m_ = 0;
  CMatrix data_;
};

}  // namespace sepwave
