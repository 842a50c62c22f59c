#include "sepwave/verify.hpp"

#include <algorithm>

#include "sepwave/errors.hpp"
#include "sepwave/matrix_core.hpp"

namespace sepwave::verify {

using matrix_core::one_norm;

namespace {

constexpr Index kMaxUnknowns = 2000;

void check_shape(const SolutionGrid& u, const ProblemSpec& spec) {
  if (u.N() != spec.grid.N || u.M() != spec.grid.M || u.m() != spec.m) {
    throw Error(ErrorKind::ShapeError, "solution grid does not match the problem dimensions");
  }
}

}  // namespace

double ResidualReport::worst() const {
  return std::max({interior_max, left_bc_max, right_bc_max, init_pos_max, init_vel_max});
}

double interior_residual(const SolutionGrid& u, const CMatrix& E, const CMatrix& A, const GridParams& grid,
                         double normalizer) {
  const double r2 = grid.r() * grid.r();
  double worst = 0.0;
  for (int j = 1; j < grid.M; ++j) {
    for (int i = 1; i < grid.N; ++i) {
      const CVector dtt = u.node(i, j + 1) - 2.0 * u.node(i, j) + u.node(i, j - 1);
      const CVector dxx = u.node(i + 1, j) - 2.0 * u.node(i, j) + u.node(i - 1, j);
      worst = std::max(worst, one_norm(CVector(E * dtt - r2 * (A * dxx))));
    }
  }
  return worst / normalizer;
}

BoundaryResidual boundary_residual(const SolutionGrid& u, const ProblemSpec& spec) {
  check_shape(u, spec);
  const int N = spec.grid.N;
  const double n = N;
  BoundaryResidual out;
  for (int j = 1; j <= spec.grid.M; ++j) {
    const CVector left = spec.A1 * u.node(0, j) + n * (spec.A2 * (u.node(1, j) - u.node(0, j)));
    const CVector right = spec.B1 * u.node(N, j) + n * (spec.B2 * (u.node(N, j) - u.node(N - 1, j)));
    out.left = std::max(out.left, one_norm(left));
    out.right = std::max(out.right, one_norm(right));
  }
  return out;
}

InitialResidual initial_residual(const SolutionGrid& u, const ProblemSpec& spec) {
  check_shape(u, spec);
  InitialResidual out;
  for (int i = 1; i < spec.grid.N; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out.position = std::max(out.position, one_norm(CVector(u.node(i, 0) - spec.F[idx])));
    const CVector vel = (u.node(i, 1) - u.node(i, 0)) / spec.grid.k - spec.G[idx];
    out.velocity = std::max(out.velocity, one_norm(vel));
  }
  return out;
}

ResidualReport residual_report(const SolutionGrid& u, const ProblemSpec& spec) {
  check_shape(u, spec);
  ResidualReport rep;
  rep.normalizer = spec.normalizer();
  rep.interior_max = interior_residual(u, spec.E, spec.A, spec.grid, rep.normalizer);
  const auto bc = boundary_residual(u, spec);
  rep.left_bc_max = bc.left / rep.normalizer;
  rep.right_bc_max = bc.right / rep.normalizer;
  const auto init = initial_residual(u, spec);
  rep.init_pos_max = init.position / rep.normalizer;
  rep.init_vel_max = init.velocity / rep.normalizer;
  return rep;
}

ReferenceSolution brute_force_reference(const ProblemSpec& spec) {
  const int N = spec.grid.N;
  const int M = spec.grid.M;
  const Index m = spec.m;
  const Index unknowns = m * (N + 1) * (M + 1);
  if (unknowns > kMaxUnknowns) {
    throw Error(ErrorKind::SizeCapExceeded, "brute-force reference limited to " + std::to_string(kMaxUnknowns) +
                                                " unknowns, problem has " + std::to_string(unknowns));
  }
  const Index equations = m * (static_cast<Index>(N - 1) * (M - 1) + 2 * M + 2 * (N - 1));
  CMatrix sys = CMatrix::Zero(equations, unknowns);
  CVector rhs = CVector::Zero(equations);
  auto col = [&](int i, int j) { return (static_cast<Index>(j) * (N + 1) + i) * m; };
  const double r2 = spec.grid.r() * spec.grid.r();
  const double n = N;
  const CMatrix I = CMatrix::Identity(m, m);

  Index row = 0;
  for (int j = 1; j < M; ++j) {
    for (int i = 1; i < N; ++i) {
      sys.block(row, col(i, j + 1), m, m) += spec.E;
      sys.block(row, col(i, j - 1), m, m) += spec.E;
      sys.block(row, col(i, j), m, m) += -2.0 * spec.E + 2.0 * r2 * spec.A;
      sys.block(row, col(i + 1, j), m, m) += -r2 * spec.A;
      sys.block(row, col(i - 1, j), m, m) += -r2 * spec.A;
      row += m;
    }
  }
  for (int j = 1; j <= M; ++j) {
    sys.block(row, col(0, j), m, m) = spec.A1 - n * spec.A2;
    sys.block(row, col(1, j), m, m) = n * spec.A2;
    row += m;
    sys.block(row, col(N, j), m, m) = spec.B1 + n * spec.B2;
    sys.block(row, col(N - 1, j), m, m) = -n * spec.B2;
    row += m;
  }
  for (int i = 1; i < N; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    sys.block(row, col(i, 0), m, m) = I;
    rhs.segment(row, m) = spec.F[idx];
    row += m;
    sys.block(row, col(i, 1), m, m) = I;
    sys.block(row, col(i, 0), m, m) = -I;
    rhs.segment(row, m) = spec.grid.k * spec.G[idx];
    row += m;
  }

  const auto sol = matrix_core::mitra_solve(sys, rhs, spec.tol.consistency);
  if (!sol.consistent) {
    throw Error(ErrorKind::InconsistentSystem,
                "stacked finite-difference system has no solution (residual " + std::to_string(sol.residual) + ")");
  }
  ReferenceSolution out;
  out.u = SolutionGrid(N, M, m);
  out.u.data() = Eigen::Map<const CMatrix>(sol.particular.data(), m, (N + 1) * (M + 1));
  out.kernel = matrix_core::rank_and_kernel(sys, spec.tol.rank).kernel;
  out.residual = sol.residual;
  return out;
}

double aligned_difference(const SolutionGrid& u, const ReferenceSolution& ref, const CMatrix& projector) {
  if (u.data().rows() != ref.u.data().rows() || u.data().cols() != ref.u.data().cols()) {
    throw Error(ErrorKind::ShapeError, "aligned_difference needs grids of equal shape");
  }
  const CMatrix diff = u.data() - ref.u.data();
  const Eigen::Map<const CVector> flat(diff.data(), diff.size());
  CVector aligned = flat;
  if (ref.kernel.cols() > 0) {
    aligned -= ref.kernel * (ref.kernel.adjoint() * flat);
  }
  const Eigen::Map<const CMatrix> nodes(aligned.data(), diff.rows(), diff.cols());
  return (projector * nodes).cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace sepwave::verify
