#include "sepwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sepwave/matrix_core.hpp"

namespace sepwave::solver {

using matrix_core::one_norm;
using sturm_liouville::EigenPair;

namespace {

double max_node_norm(const std::vector<CVector>& values, int N) {
  double out = 0.0;
  for (int i = 1; i < N; ++i) {
    out = std::max(out, one_norm(values[static_cast<std::size_t>(i)]));
  }
  return out;
}

// Interior rows of a grid function as an (N-1) x m matrix.
CMatrix interior_rows(const std::vector<CVector>& values, int N, Index m) {
  CMatrix out(N - 1, m);
  for (int i = 1; i < N; ++i) {
    out.row(i - 1) = values[static_cast<std::size_t>(i)].transpose();
  }
  return out;
}

double left_boundary_defect(const ProblemSpec& spec, const SolutionGrid& u, int j) {
  const int N = spec.grid.N;
  const CVector res = spec.A1 * u.node(0, j) + static_cast<double>(N) * spec.A2 * (u.node(1, j) - u.node(0, j));
  return one_norm(res);
}

double right_boundary_defect(const ProblemSpec& spec, const SolutionGrid& u, int j) {
  const int N = spec.grid.N;
  const CVector res = spec.B1 * u.node(N, j) + static_cast<double>(N) * spec.B2 * (u.node(N, j) - u.node(N - 1, j));
  return one_norm(res);
}

double block_residual(const pencil::PencilData& pd, const pencil::PropagatorPair& prop, const CVector& P,
                      const CVector& Q, const CVector& f, const CVector& g, double k) {
  const CVector first = pd.projector * (P + Q) - f;
  const CVector second = prop.Z0 * P + prop.Z1 * Q - f - k * g;
  return (one_norm(first) + one_norm(second)) / (1.0 + one_norm(f) + k * one_norm(g));
}

}  // namespace

BoundaryMatrix build_boundary_matrix(const ProblemSpec& spec) {
  const Index m = spec.m;
  BoundaryMatrix bm;
  bm.Gab.resize(2 * m, m);
  bm.Gab.topRows(m) = spec.alpha * spec.A1 - spec.A2;
  bm.Gab.bottomRows(m) = spec.beta * spec.B1 - spec.B2;
  const auto rk = matrix_core::rank_and_kernel(bm.Gab, spec.tol.rank);
  bm.rank = rk.rank;
  bm.kernel = rk.kernel;
  bm.pinv = matrix_core::generalized_inverse(bm.Gab, spec.tol.rank);
  if (bm.rank >= m) {
    throw Error(ErrorKind::RankFull, "boundary matrix G(alpha, beta) has full rank " + std::to_string(m) +
                                         "; only the trivial solution satisfies the boundary relations");
  }
  return bm;
}

std::string ConsistencyReport::failures() const {
  std::string out;
  auto add = [&out](bool ok, const char* name) {
    if (!ok) {
      out += out.empty() ? "" : ", ";
      out += name;
    }
  };
  add(projector_fixes_data, "projector_fixes_data");
  add(data_in_boundary_kernel, "data_in_boundary_kernel");
  add(kernel_invariance, "kernel_invariance");
  return out;
}

ConsistencyReport check_consistency(const ProblemSpec& spec, const pencil::PencilData& pd, const BoundaryMatrix& bm) {
  const int N = spec.grid.N;
  const double data_scale = std::max({1.0, max_node_norm(spec.F, N), max_node_norm(spec.G, N)});
  const double projector_scale = data_scale * std::max(1.0, one_norm(pd.projector));
  const double kernel_scale = data_scale * std::max(1.0, one_norm(bm.Gab));

  ConsistencyReport rep;
  for (int i = 1; i < N; ++i) {
    for (const auto* values : {&spec.F, &spec.G}) {
      const CVector& v = (*values)[static_cast<std::size_t>(i)];
      rep.projector_residual = std::max(rep.projector_residual, one_norm(CVector(pd.projector * v - v)) / projector_scale);
      rep.kernel_residual = std::max(rep.kernel_residual, one_norm(CVector(bm.Gab * v)) / kernel_scale);
    }
  }
  rep.invariance_defect = matrix_core::kernel_invariance_defect(bm.Gab, pd.reduced, spec.tol.rank);
  rep.projector_fixes_data = rep.projector_residual <= spec.tol.consistency;
  rep.data_in_boundary_kernel = rep.kernel_residual <= spec.tol.consistency;
  rep.kernel_invariance = rep.invariance_defect <= spec.tol.consistency;
  return rep;
}

std::vector<double> mode_rhos(const ProblemSpec& spec, const std::vector<EigenPair>& pairs) {
  if (spec.rho_override) {
    return *spec.rho_override;
  }
  const double r = spec.grid.r();
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const EigenPair& pair : pairs) {
    out.push_back(-r * r * pair.lambda);
  }
  return out;
}

ModeCoefficients solve_mode_coefficients(const pencil::PencilData& pd, const pencil::PropagatorPair& prop,
                                         const CVector& f, const CVector& g, double k) {
  const Index m = pd.size();
  const CMatrix& Pi = pd.projector;
  const CMatrix I = CMatrix::Identity(m, m);
  ModeCoefficients out;
  out.l = prop.mode;
  out.rho = prop.rho;

  // Closed form: eliminating Q gives (Z1 - Z0) P = (Z1 - I) f - k g, and
  // eliminating P gives (Z1 - Z0) Q = (I - Z0) f + k g.
  const CMatrix diff = (prop.Z1 - prop.Z0) * Pi;
  const CMatrix diff_inv = matrix_core::generalized_inverse(diff, pd.tol.rank);
  const bool invertible_on_range =
      one_norm(CMatrix(diff * diff_inv * Pi - Pi)) <= pd.tol.consistency * std::max(1.0, one_norm(Pi));
  if (invertible_on_range) {
    out.P = Pi * diff_inv * ((prop.Z1 - I) * f - k * g);
    out.Q = Pi * diff_inv * ((I - prop.Z0) * f + k * g);
    out.residual = block_residual(pd, prop, out.P, out.Q, f, g, k);
    if (out.residual <= pd.tol.residual) {
      return out;
    }
  }

  // Z1 - Z0 is singular on part of the range (a core eigenvalue d = 0, where
  // the mode is stationary). Solve the stacked system directly.
  CMatrix block(2 * m, 2 * m);
  block << Pi, Pi, prop.Z0, prop.Z1;
  CVector rhs(2 * m);
  rhs << f, f + k * g;
  const auto sol = matrix_core::mitra_solve(block, rhs, pd.tol.consistency);
  if (!sol.consistent) {
    std::ostringstream msg;
    msg << "mode " << prop.mode << ": initial data has no separated solution (initial velocity along a "
        << "stationary core direction?), residual " << sol.residual;
    throw Error(ErrorKind::ConsistencyViolation, msg.str());
  }
  out.block_fallback = true;
  out.P = Pi * sol.particular.head(m);
  out.Q = Pi * sol.particular.tail(m);
  out.residual = block_residual(pd, prop, out.P, out.Q, f, g, k);
  if (!(out.residual <= pd.tol.residual)) {
    std::ostringstream msg;
    msg << "mode " << prop.mode << ": coefficient residual " << out.residual << " exceeds tolerance";
    throw Error(ErrorKind::ConsistencyViolation, msg.str());
  }
  return out;
}

ModeCoefficients solve_mode_coefficients(const ProblemSpec& spec, const pencil::PencilData& pd,
                                         const std::vector<EigenPair>& pairs, int l) {
  if (l < 0 || l >= static_cast<int>(pairs.size())) {
    throw Error(ErrorKind::InvalidParameter, "mode index out of range");
  }
  const auto sl = sturm_liouville::SLProblem::canonical(spec.grid.N, spec.alpha, spec.beta);
  const CMatrix f = sturm_liouville::expand(interior_rows(spec.F, spec.grid.N, spec.m), pairs, sl);
  const CMatrix g = sturm_liouville::expand(interior_rows(spec.G, spec.grid.N, spec.m), pairs, sl);
  const double rho = mode_rhos(spec, pairs)[static_cast<std::size_t>(l)];
  const auto prop = pencil::build_propagators(pd, rho, pencil::RhoCheck::Enforce, l);
  return solve_mode_coefficients(pd, prop, f.row(l).transpose(), g.row(l).transpose(), spec.grid.k);
}

SolutionGrid assemble_solution(const ProblemSpec& spec, const std::vector<pencil::PropagatorPair>& props,
                               const std::vector<EigenPair>& pairs, const std::vector<ModeCoefficients>& coeffs) {
  const int N = spec.grid.N;
  const int M = spec.grid.M;
  if (props.size() != pairs.size() || coeffs.size() != pairs.size()) {
    throw Error(ErrorKind::ShapeError, "assemble_solution needs one propagator pair and coefficient set per mode");
  }
  SolutionGrid u(N, M, spec.m);
  for (std::size_t l = 0; l < pairs.size(); ++l) {
    const RVector v = pairs[l].extended();
    CVector a = coeffs[l].P;
    CVector b = coeffs[l].Q;
    for (int j = 0; j <= M; ++j) {
      const CVector c = a + b;
      for (int i = 0; i <= N; ++i) {
        u.node(i, j) += v(i) * c;
      }
      a = props[l].Z0 * a;
      b = props[l].Z1 * b;
    }
  }
  if (!u.all_finite()) {
    throw Error(ErrorKind::DomainError, "assembled solution has non-finite entries");
  }

  const double limit = spec.tol.residual * spec.normalizer();
  for (int j = 1; j <= M; ++j) {
    const double left = left_boundary_defect(spec, u, j);
    const double right = right_boundary_defect(spec, u, j);
    if (left > limit || right > limit) {
      std::ostringstream msg;
      msg << "boundary relations fail at j = " << j << " (left " << left << ", right " << right << ")";
      throw Error(ErrorKind::BoundaryExtensionInconsistent, msg.str());
    }
  }
  return u;
}

StabilityReport stability_report(const ProblemSpec& spec, const std::vector<pencil::PropagatorPair>& props,
                                 const std::vector<EigenPair>& pairs, const SolutionGrid& sol) {
  constexpr double kEnvelopeSlack = 1e-6;
  const double k = spec.grid.k;
  const double T = spec.grid.T;
  const int M = spec.grid.M;
  StabilityReport rep;
  rep.sup_norm = sol.sup_norm();
  rep.data_norm = spec.normalizer();

  double lambda_max = 0.0;
  for (const EigenPair& pair : pairs) {
    lambda_max = std::max(lambda_max, std::abs(pair.lambda));
  }
  const double rho_bound = spec.grid.r() * spec.grid.r() * lambda_max;

  for (const auto& prop : props) {
    ModeStability ms;
    ms.l = prop.mode;
    ms.rho = prop.rho;
    ms.growth_z0 = std::max(one_norm(prop.Z0) - 1.0, 0.0) / k;
    ms.growth_z1 = std::max(one_norm(prop.Z1) - 1.0, 0.0) / k;
    CMatrix p0 = prop.Z0;
    CMatrix p1 = prop.Z1;
    for (int j = 1; j <= M; ++j) {
      ms.max_power_z0 = std::max(ms.max_power_z0, one_norm(p0));
      ms.max_power_z1 = std::max(ms.max_power_z1, one_norm(p1));
      p0 = p0 * prop.Z0;
      p1 = p1 * prop.Z1;
    }
    ms.envelope_holds = ms.max_power_z0 <= std::exp(T * ms.growth_z0) * (1.0 + kEnvelopeSlack) &&
                        ms.max_power_z1 <= std::exp(T * ms.growth_z1) * (1.0 + kEnvelopeSlack);
    rep.growth = std::max({rep.growth, ms.growth_z0, ms.growth_z1});
    rep.envelope_holds = rep.envelope_holds && ms.envelope_holds;
    rep.rho_bound_holds = rep.rho_bound_holds && std::abs(prop.rho) <= rho_bound * (1.0 + 1e-12);
    rep.modes.push_back(ms);
  }
  rep.bounded = rep.envelope_holds && std::isfinite(rep.sup_norm);
  return rep;
}

PipelineResult run_pipeline(const ProblemSpec& spec) {
  spec.validate();
  PipelineResult res;
  try {
    const auto sl = sturm_liouville::SLProblem::canonical(spec.grid.N, spec.alpha, spec.beta);
    res.pairs = sturm_liouville::solve_psd(sl);

    const Complex gamma = spec.gamma ? *spec.gamma : pencil::find_gamma(spec.E, spec.A, spec.tol.max_condition);
    res.pencil = pencil::build_pencil(spec.E, spec.A, gamma, spec.tol);
    const auto& pd = *res.pencil;

    res.boundary = build_boundary_matrix(spec);
    res.consistency = check_consistency(spec, pd, *res.boundary);
    if (!res.consistency->passed()) {
      throw Error(ErrorKind::ConsistencyViolation, "failed conditions: " + res.consistency->failures());
    }

    const auto rhos = mode_rhos(spec, res.pairs);
    double margin = std::numeric_limits<double>::infinity();
    for (double rho : rhos) {
      margin = std::min(margin, pencil::rho_margin(pd, rho));
    }
    res.rho_margin = margin;
    for (std::size_t l = 0; l < rhos.size(); ++l) {
      res.propagators.push_back(
          pencil::build_propagators(pd, rhos[l], pencil::RhoCheck::Enforce, static_cast<int>(l)));
    }

    const CMatrix f = sturm_liouville::expand(interior_rows(spec.F, spec.grid.N, spec.m), res.pairs, sl);
    const CMatrix g = sturm_liouville::expand(interior_rows(spec.G, spec.grid.N, spec.m), res.pairs, sl);
    for (std::size_t l = 0; l < rhos.size(); ++l) {
      const auto row = static_cast<Index>(l);
      res.modes.push_back(solve_mode_coefficients(pd, res.propagators[l], f.row(row).transpose(),
                                                  g.row(row).transpose(), spec.grid.k));
    }

    res.solution = assemble_solution(spec, res.propagators, res.pairs, res.modes);
    res.stability = stability_report(spec, res.propagators, res.pairs, *res.solution);
  } catch (const Error& e) {
    if (category(e.kind()) == ErrorCategory::Input) {
      throw;
    }
    res.failure = e;
  }
  return res;
}

}  // namespace sepwave::solver
