#pragma once

#include "sepwave/problem.hpp"
#include "sepwave/types.hpp"

/// Finite-difference residuals of a grid function against the discrete
/// mixed problem, written directly from the stencils. Nothing here touches the
/// spectral construction.
namespace sepwave::verify {

/// All fields are divided by the problem normalizer
/// 1 + max(|F|, k |G|).
struct ResidualReport {
  double interior_max = 0.0;
  double left_bc_max = 0.0;
  double right_bc_max = 0.0;
  double init_pos_max = 0.0;
  double init_vel_max = 0.0;
  double normalizer = 1.0;

  double worst() const;
  bool within(double tol) const { return worst() <= tol; }
};

/// max over 0<i<N, 0<j<M of
/// |E (U(i,j+1) - 2U(i,j) + U(i,j-1)) - r^2 A (U(i+1,j) - 2U(i,j) + U(i-1,j))|_1 / normalizer.
double interior_residual(const SolutionGrid& u, const CMatrix& E, const CMatrix& A, const GridParams& grid,
                         double normalizer = 1.0);

struct BoundaryResidual {
  double left = 0.0;
  double right = 0.0;
};

/// Boundary relations over 0 < j <= M.
BoundaryResidual boundary_residual(const SolutionGrid& u, const ProblemSpec& spec);

struct InitialResidual {
  double position = 0.0;
  double velocity = 0.0;
};

/// |U(i,0) - F(i)|_1 and |(U(i,1) - U(i,0)) / k - G(i)|_1 over 0 < i < N.
InitialResidual initial_residual(const SolutionGrid& u, const ProblemSpec& spec);

/// Throws ShapeError if the grid does not match the problem.
ResidualReport residual_report(const SolutionGrid& u, const ProblemSpec& spec);

struct ReferenceSolution {
  SolutionGrid u;  ///< minimum-norm solution of the stacked system
  /// Orthonormal basis (unknowns x dim) of the stacked system's kernel, in
  /// the column order of SolutionGrid::data().
  CMatrix kernel;
  double residual = 0.0;
};

/// Stacks the interior scheme for 0<i<N, 0<j<M, both boundary relations for
/// 0<j<=M, and the initial conditions for 0<i<N into one dense system over
/// all nodes and solves it by pseudoinverse.
/// Throws SizeCapExceeded above 2000 unknowns and InconsistentSystem when
/// the stacked system has no solution.
ReferenceSolution brute_force_reference(const ProblemSpec& spec);

/// Largest |Pi D(i,j)|_1 over nodes, where D = U - U_ref with its component in
/// the reference kernel removed.
double aligned_difference(const SolutionGrid& u, const ReferenceSolution& ref, const CMatrix& projector);

}  // namespace sepwave::verify
