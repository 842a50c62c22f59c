#pragma once

#include <optional>
#include <vector>

#include "sepwave/matrix_core.hpp"
#include "sepwave/types.hpp"

/// Preprocessing of the singular pencil (E, A). With gamma such that
/// gamma E + A is invertible:
///
///   Ehat = (gamma E + A)^{-1} E,  Ahat = (gamma E + A)^{-1} A,  gamma Ehat + Ahat = I.
///
/// The time factor of each separated mode then obeys
///
///   Ehat g(j+1) - (2 Ehat + rho Ahat) g(j) + Ehat g(j-1) = 0,
///
/// whose solutions on the range of the Drazin projector Ehat Ehat^D are
/// generated by the propagators Z0 = P+(Ehat^D Ahat) Ehat Ehat^D and
/// Z1 = P-(Ehat^D Ahat) Ehat Ehat^D.
namespace sepwave::pencil {

/// Unscaled shift candidates, tried in order by find_gamma.
std::vector<Complex> gamma_ladder(std::size_t count);

/// First ladder value (scaled by |A|_1 / max(|E|_1, 1)) for which
/// gamma E + A has 1-norm condition number <= max_condition.
/// Throws NoRegularizingGamma.
Complex find_gamma(const CMatrix& E, const CMatrix& A, double max_condition = 1e8);

struct PencilData {
  Complex gamma;
  CMatrix Ehat;
  CMatrix Ahat;
  CMatrix EhatD;
  int index = 0;  ///< index of Ehat
  CMatrix projector;  ///< Ehat Ehat^D
  CMatrix reduced;    ///< Ehat^D Ahat
  std::vector<Complex> spectrum_reduced;
  /// Some eigenvalue of the reduced operator is nonzero. When false every
  /// mode collapses to the trivial solution.
  bool nontrivial_spectrum = false;
  double shift_condition = 0.0;

  // Core coordinates: Ehat = T blockdiag(C, N) T^{-1}. The reduced operator
  // acts on the core block as C^{-1} - gamma I and vanishes on the nilpotent block.
  CMatrix T;
  CMatrix T_inv;
  Index core_dim = 0;
  CMatrix core_reduced;
  std::optional<matrix_core::Eigendecomposition> core_eigen;
  Tolerances tol;

  Index size() const { return Ehat.rows(); }
};

/// Throws SingularShift when gamma E + A is not invertible at tolerance.
PencilData build_pencil(const CMatrix& E, const CMatrix& A, Complex gamma, const Tolerances& tol = {});

struct PropagatorPair {
  int mode = 0;
  double rho = 0.0;
  CMatrix Z0;
  CMatrix Z1;
};

enum class RhoCheck { Enforce, Skip };

/// Smallest |rho d (1 + rho d / 4)| over the nonzero core eigenvalues d.
/// Z1 - Z0 is invertible on the core exactly when this is nonzero for every
/// core eigenvalue. Returns +inf when the core spectrum has no nonzero value.
double rho_margin(const PencilData& pd, double rho);

/// Throws RhoDegenerate (when enforced) or DefectiveMatrix.
PropagatorPair build_propagators(const PencilData& pd, double rho, RhoCheck check = RhoCheck::Enforce,
                                 int mode = 0);

/// G(j) = Z0^j Ehat Ehat^D l1 + Z1^j Ehat Ehat^D l2, j >= 0.
CVector solve_matrix_difference(const PencilData& pd, const PropagatorPair& prop, const CVector& l1,
                                const CVector& l2, int j);
CVector solve_matrix_difference(const PencilData& pd, double rho, const CVector& l1, const CVector& l2,
                                int j);

/// Ehat next - (2 Ehat + rho Ahat) cur + Ehat prev.
CVector recurrence_residual(const PencilData& pd, double rho, const CVector& prev, const CVector& cur,
                            const CVector& next);

}  // namespace sepwave::pencil
