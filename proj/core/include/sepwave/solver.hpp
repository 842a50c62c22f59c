#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sepwave/errors.hpp"
#include "sepwave/pencil.hpp"
#include "sepwave/problem.hpp"
#include "sepwave/sturm_liouville.hpp"

/// Mixed-problem solve by separation of variables. Each Sturm-Liouville
/// mode v_l carries a time factor driven by the propagators built with
/// rho_l = -r^2 lambda_l:
///
///   U(i,j) = sum_l (Z0_l^j P_l + Z1_l^j Q_l) v_l(i).
namespace sepwave::solver {

struct BoundaryMatrix {
  CMatrix Gab;  ///< 2m x m, rows (alpha A1 - A2; beta B1 - B2)
  Index rank = 0;
  CMatrix kernel;  ///< orthonormal basis of Ker Gab
  CMatrix pinv;
};

/// Throws RankFull when Gab has trivial kernel.
BoundaryMatrix build_boundary_matrix(const ProblemSpec& spec);

/// Conditions the data and coefficients must satisfy before a solve.
/// Residuals are relative; a condition passes when its residual is at most
/// the consistency tolerance.
struct ConsistencyReport {
  bool projector_fixes_data = false;  ///< Ehat Ehat^D F(i) = F(i), same for G
  double projector_residual = 0.0;
  bool data_in_boundary_kernel = false;  ///< Gab F(i) = Gab G(i) = 0
  double kernel_residual = 0.0;
  bool kernel_invariance = false;  ///< Ker Gab invariant under Ehat^D Ahat
  double invariance_defect = 0.0;

  bool passed() const { return projector_fixes_data && data_in_boundary_kernel && kernel_invariance; }
  /// Comma-separated names of failing conditions.
  std::string failures() const;
};

/// Data conditions are checked on interior nodes 0 < i < N.
ConsistencyReport check_consistency(const ProblemSpec& spec, const pencil::PencilData& pd, const BoundaryMatrix& bm);

struct ModeCoefficients {
  int l = 0;
  double rho = 0.0;
  CVector P;
  CVector Q;
  /// The closed form through [(Z1 - Z0) Ehat Ehat^D]^G was not usable and
  /// the stacked two-block system was solved instead.
  bool block_fallback = false;
  /// Relative residual of the two-block system.
  double residual = 0.0;
};

/// rho_l for each mode, honouring spec.rho_override.
std::vector<double> mode_rhos(const ProblemSpec& spec, const std::vector<sturm_liouville::EigenPair>& pairs);

/// Solves
///
///   Ehat Ehat^D (P + Q) = f,   Z0 P + Z1 Q = f + k g
///
/// for the mode coefficients f, g of the initial data. Throws
/// ConsistencyViolation when the system has no solution.
ModeCoefficients solve_mode_coefficients(const pencil::PencilData& pd, const pencil::PropagatorPair& prop,
                                         const CVector& f, const CVector& g, double k);

/// Builds the propagators for mode l (0-based) and solves its coefficients.
ModeCoefficients solve_mode_coefficients(const ProblemSpec& spec, const pencil::PencilData& pd,
                                         const std::vector<sturm_liouville::EigenPair>& pairs, int l);

/// Interior nodes from the modal sum, boundary nodes from the eigenfunction
/// extension v_l(0), v_l(N). Throws BoundaryExtensionInconsistent when the
/// boundary relations fail for some j > 0.
SolutionGrid assemble_solution(const ProblemSpec& spec, const std::vector<pencil::PropagatorPair>& props,
                               const std::vector<sturm_liouville::EigenPair>& pairs,
                               const std::vector<ModeCoefficients>& coeffs);

struct ModeStability {
  int l = 0;
  double rho = 0.0;
  double max_power_z0 = 0.0;  ///< max_{j <= M} |Z0^j|_1
  double max_power_z1 = 0.0;
  /// max(|Z|_1 - 1, 0) / k from the first power, for Z0 and Z1.
  double growth_z0 = 0.0;
  double growth_z1 = 0.0;
  /// max_j |Z^j|_1 <= exp(T growth) (1 + 1e-6) for both propagators.
  bool envelope_holds = false;
};

struct StabilityReport {
  std::vector<ModeStability> modes;
  double sup_norm = 0.0;
  double data_norm = 0.0;
  double growth = 0.0;  ///< largest per-mode growth constant
  bool envelope_holds = true;
  /// |rho_l| <= r^2 max_l |lambda_l| for every mode.
  bool rho_bound_holds = true;
  /// Envelope holds and the solution is finite.
  bool bounded = true;
};

StabilityReport stability_report(const ProblemSpec& spec, const std::vector<pencil::PropagatorPair>& props,
                                 const std::vector<sturm_liouville::EigenPair>& pairs, const SolutionGrid& sol);

/// Everything the pipeline produced before it stopped. `failure` is set when
/// a stage threw; the earlier stages stay populated for reporting.
struct PipelineResult {
  std::vector<sturm_liouville::EigenPair> pairs;
  std::optional<pencil::PencilData> pencil;
  std::optional<BoundaryMatrix> boundary;
  std::optional<ConsistencyReport> consistency;
  /// Smallest |rho d (1 + rho d / 4)| over modes and nonzero core eigenvalues.
  std::optional<double> rho_margin;
  std::vector<pencil::PropagatorPair> propagators;
  std::vector<ModeCoefficients> modes;
  std::optional<SolutionGrid> solution;
  std::optional<StabilityReport> stability;
  std::optional<Error> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Input errors (shape, parse) are thrown; every later failure is captured.
PipelineResult run_pipeline(const ProblemSpec& spec);

}  // namespace sepwave::solver
