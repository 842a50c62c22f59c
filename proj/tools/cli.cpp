#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sepwave/matrix_core.hpp"
#include "sepwave/problem_io.hpp"
#include "sepwave/sturm_liouville.hpp"

namespace sepwave::cli {

namespace fs = std::filesystem;

namespace {

const char* pass(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string num(double value) { return io::format_double(value); }

std::string num(Complex z) {
  if (z.imag() == 0.0) {
    return num(z.real());
  }
  return num(z.real()) + (z.imag() < 0.0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

void write_conditions(std::ostringstream& out, const ProblemSpec& spec, const solver::PipelineResult& res) {
  out << "[conditions]\n";
  const auto not_reached = [&out](const char* name) { out << name << ": not evaluated\n"; };
  if (res.pencil) {
    out << "reduced_spectrum_nontrivial: " << (res.pencil->nontrivial_spectrum ? "yes" : "no") << "\n";
  }
  if (res.boundary) {
    out << "rank_deficient_boundary: PASS (rank " << res.boundary->rank << " < " << spec.m << ")\n";
  } else if (res.failure && res.failure->kind() == ErrorKind::RankFull) {
    out << "rank_deficient_boundary: FAIL (rank " << spec.m << " = m)\n";
  } else {
    not_reached("rank_deficient_boundary");
  }
  if (res.consistency) {
    const auto& c = *res.consistency;
    out << "projector_fixes_data: " << pass(c.projector_fixes_data) << " (residual " << num(c.projector_residual)
        << ")\n";
    out << "data_in_boundary_kernel: " << pass(c.data_in_boundary_kernel) << " (residual " << num(c.kernel_residual)
        << ")\n";
    out << "kernel_invariance: " << pass(c.kernel_invariance) << " (defect " << num(c.invariance_defect) << ")\n";
  } else {
    not_reached("projector_fixes_data");
    not_reached("data_in_boundary_kernel");
    not_reached("kernel_invariance");
  }
  if (res.rho_margin) {
    out << "rho_nondegenerate: " << pass(*res.rho_margin > spec.tol.rank) << " (min |rho d (1 + rho d / 4)| = "
        << num(*res.rho_margin) << ")\n";
  } else {
    not_reached("rho_nondegenerate");
  }
  if (res.consistency && res.consistency->passed() && res.rho_margin && res.failure &&
      res.failure->kind() == ErrorKind::ConsistencyViolation) {
    out << "mode_coefficients_solvable: FAIL\n";
  } else if (!res.modes.empty() && res.modes.size() == res.pairs.size()) {
    out << "mode_coefficients_solvable: PASS\n";
  } else {
    not_reached("mode_coefficients_solvable");
  }
  if (res.solution) {
    out << "boundary_extension: PASS\n";
  } else if (res.failure && res.failure->kind() == ErrorKind::BoundaryExtensionInconsistent) {
    out << "boundary_extension: FAIL\n";
  } else {
    not_reached("boundary_extension");
  }
  if (res.stability) {
    out << "rho_bound: " << pass(res.stability->rho_bound_holds) << " (recorded, not a gate)\n";
  }
}

void write_modes(std::ostringstream& out, const solver::PipelineResult& res) {
  if (res.pairs.empty()) {
    return;
  }
  out << "\n[modes]\n";
  out << "l,lambda,rho,z0_modulus_min,z0_modulus_max,p_norm,q_norm,block_fallback,coefficient_residual\n";
  for (std::size_t l = 0; l < res.pairs.size(); ++l) {
    out << l + 1 << ',' << num(res.pairs[l].lambda);
    if (l < res.propagators.size() && res.pencil && res.pencil->core_eigen) {
      const auto& prop = res.propagators[l];
      const auto plus = matrix_core::AnalyticFunction::p_plus(prop.rho);
      double lo = INFINITY;
      double hi = 0.0;
      const CVector& d = res.pencil->core_eigen->values;
      for (Index i = 0; i < d.size(); ++i) {
        const double mod = std::abs(plus(d(i)));
        lo = std::min(lo, mod);
        hi = std::max(hi, mod);
      }
      out << ',' << num(prop.rho) << ',' << num(d.size() ? lo : 0.0) << ',' << num(hi);
    } else {
      out << ",,,";
    }
    if (l < res.modes.size()) {
      const auto& mc = res.modes[l];
      out << ',' << num(matrix_core::one_norm(mc.P)) << ',' << num(matrix_core::one_norm(mc.Q)) << ','
          << (mc.block_fallback ? "yes" : "no") << ',' << num(mc.residual);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

ProblemSpec load(const fs::path& input, const Overrides& overrides) {
  ProblemSpec spec = io::parse_problem(input);
  apply(overrides, spec);
  spec.validate();
  return spec;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (category(kind)) {
    case ErrorCategory::ModelRejection:
      return kExitRejected;
    case ErrorCategory::Input:
      return kExitInput;
    case ErrorCategory::Numerical:
      return kExitNumerical;
  }
  return kExitNumerical;
}

void apply(const Overrides& overrides, ProblemSpec& spec) {
  if (overrides.tol_rank) {
    spec.tol.rank = *overrides.tol_rank;
  }
  if (overrides.tol_residual) {
    spec.tol.residual = *overrides.tol_residual;
  }
  if (overrides.gamma) {
    spec.gamma = overrides.gamma;
  }
}

Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  if (!(in >> re)) {
    throw Error(ErrorKind::ParseError, "cannot parse complex value \"" + text + "\"");
  }
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) {
      throw Error(ErrorKind::ParseError, "cannot parse complex value \"" + text + "\"");
    }
  }
  if (!in.eof() && (in >> std::ws, !in.eof())) {
    throw Error(ErrorKind::ParseError, "trailing characters in complex value \"" + text + "\"");
  }
  return {re, im};
}

std::string format_report(const ProblemSpec& spec, const solver::PipelineResult& res,
                          const std::optional<verify::ResidualReport>& residuals, int exit_status) {
  std::ostringstream out;
  out << "sepwave report\n";
  if (res.ok()) {
    out << "status: " << (exit_status == kExitOk ? "solved" : "residual check failed") << "\n";
  } else {
    out << "status: rejected\n";
    out << "error: " << res.failure->what() << "\n";
  }
  out << "exit_code: " << exit_status << "\n\n";

  out << "[problem]\n";
  out << "m: " << spec.m << "\nN: " << spec.grid.N << "\nk: " << num(spec.grid.k) << "\nT: " << num(spec.grid.T)
      << "\nM: " << spec.grid.M << "\nr: " << num(spec.grid.r()) << "\nalpha: " << num(spec.alpha)
      << "\nbeta: " << num(spec.beta) << "\n\n";

  if (res.pencil) {
    const auto& pd = *res.pencil;
    out << "[pencil]\n";
    out << "gamma: " << num(pd.gamma) << "\n";
    out << "shift_condition: " << num(pd.shift_condition) << "\n";
    out << "index: " << pd.index << "\n";
    out << "core_dimension: " << pd.core_dim << "\n";
    out << "reduced_spectrum:";
    for (Complex z : pd.spectrum_reduced) {
      out << ' ' << num(z);
    }
    out << "\n\n";
  }
  write_conditions(out, spec, res);
  write_modes(out, res);

  if (residuals) {
    out << "\n[residuals]\n";
    out << "normalizer: " << num(residuals->normalizer) << "\n";
    out << "interior_max: " << num(residuals->interior_max) << "\n";
    out << "left_bc_max: " << num(residuals->left_bc_max) << "\n";
    out << "right_bc_max: " << num(residuals->right_bc_max) << "\n";
    out << "init_pos_max: " << num(residuals->init_pos_max) << "\n";
    out << "init_vel_max: " << num(residuals->init_vel_max) << "\n";
    out << "within_tolerance: " << (residuals->within(spec.tol.residual) ? "yes" : "no") << "\n";
  }
  if (res.stability) {
    const auto& st = *res.stability;
    out << "\n[stability]\n";
    out << "sup_norm: " << num(st.sup_norm) << "\n";
    out << "data_norm: " << num(st.data_norm) << "\n";
    out << "growth_constant: " << num(st.growth) << "\n";
    out << "envelope_holds: " << (st.envelope_holds ? "yes" : "no") << "\n";
    out << "bounded: " << (st.bounded ? "yes" : "no") << "\n";
    out << "l,max_power_z0,max_power_z1,growth_z0,growth_z1\n";
    for (const auto& ms : st.modes) {
      out << ms.l + 1 << ',' << num(ms.max_power_z0) << ',' << num(ms.max_power_z1) << ',' << num(ms.growth_z0)
          << ',' << num(ms.growth_z1) << '\n';
    }
  }
  return out.str();
}

int run_solve(const ProblemSpec& spec, const fs::path& out_dir, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  }
  const solver::PipelineResult res = solver::run_pipeline(spec);
  std::optional<verify::ResidualReport> residuals;
  int status = kExitOk;
  if (res.ok()) {
    residuals = verify::residual_report(*res.solution, spec);
    if (!residuals->within(spec.tol.residual)) {
      status = kExitNumerical;
    }
    io::write_solution_csv(*res.solution, spec.grid, out_dir / "solution.csv");
  } else {
    status = exit_code(res.failure->kind());
  }
  if (!res.pairs.empty()) {
    io::write_text(out_dir / "eigen.csv", io::eigen_csv(res.pairs));
  }
  io::write_text(out_dir / "report.txt", format_report(spec, res, residuals, status));
  if (res.ok()) {
    log << "solved: worst residual " << num(residuals->worst()) << ", sup norm " << num(res.stability->sup_norm)
        << "\n";
  } else {
    log << "rejected: " << res.failure->what() << "\n";
  }
  return status;
}

int run_verify(const fs::path& solution_csv, const ProblemSpec& spec, std::ostream& log) {
  const SolutionGrid u = io::read_solution_csv(solution_csv, spec.grid, spec.m);
  const auto rep = verify::residual_report(u, spec);
  log << "interior_max: " << num(rep.interior_max) << "\n"
      << "left_bc_max: " << num(rep.left_bc_max) << "\n"
      << "right_bc_max: " << num(rep.right_bc_max) << "\n"
      << "init_pos_max: " << num(rep.init_pos_max) << "\n"
      << "init_vel_max: " << num(rep.init_vel_max) << "\n";
  const bool ok = rep.within(spec.tol.residual);
  log << (ok ? "verified" : "residuals exceed tolerance") << "\n";
  return ok ? kExitOk : kExitRejected;
}

int run_eigen(const ProblemSpec& spec, const fs::path& out_dir, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  }
  const auto sl = sturm_liouville::SLProblem::canonical(spec.grid.N, spec.alpha, spec.beta);
  const auto pairs = sturm_liouville::solve_psd(sl);
  const std::string table = io::eigen_csv(pairs);
  io::write_text(out_dir / "eigen.csv", table);
  log << table;
  return kExitOk;
}

int run_example(fixtures::Variant variant, const fs::path& output, std::ostream& log) {
  const std::string text = io::serialize_problem(fixtures::example(variant));
  if (output.empty()) {
    log << text;
  } else {
    io::write_text(output, text);
  }
  return kExitOk;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separated discrete solutions of singular hyperbolic systems E u_tt = A u_xx"};
  app.require_subcommand(1);

  fs::path input;
  fs::path out_dir = ".";
  fs::path solution;
  fs::path output;
  std::string variant_name = "worked";
  std::optional<double> tol_rank;
  std::optional<double> tol_residual;
  std::string gamma_text;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "problem JSON file")->required();
    cmd->add_option("--tol-rank", tol_rank, "relative singular-value cutoff");
    cmd->add_option("--tol-residual", tol_residual, "residual acceptance");
    cmd->add_option("--gamma", gamma_text, "pencil shift as re or re,im");
    cmd->add_flag("--quiet", quiet, "suppress console output");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a problem and write solution.csv, report.txt, eigen.csv");
  add_common(solve);
  solve->add_option("--out-dir", out_dir, "output directory");

  CLI::App* verify_cmd = app.add_subcommand("verify", "check a stored solution against the difference equations");
  add_common(verify_cmd);
  verify_cmd->add_option("--solution", solution, "solution CSV")->required();

  CLI::App* eigen = app.add_subcommand("eigen", "write the Sturm-Liouville eigenvalues");
  add_common(eigen);
  eigen->add_option("--out-dir", out_dir, "output directory");

  CLI::App* example = app.add_subcommand("example", "print a fixture problem as JSON");
  example->add_option("--variant", variant_name, "worked, zero, bad-projector, bad-kernel, rank-full, rho-degenerate");
  example->add_option("--output,-o", output, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  std::ostringstream sink;
  std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : out;
  try {
    if (example->parsed()) {
      const auto variant = fixtures::parse_variant(variant_name);
      if (!variant) {
        throw Error(ErrorKind::InvalidParameter, "unknown variant \"" + variant_name + "\"");
      }
      return run_example(*variant, output, out);
    }
    Overrides overrides;
    overrides.tol_rank = tol_rank;
    overrides.tol_residual = tol_residual;
    if (!gamma_text.empty()) {
      overrides.gamma = parse_complex(gamma_text);
    }
    const ProblemSpec spec = load(input, overrides);
    if (solve->parsed()) {
      return run_solve(spec, out_dir, log);
    }
    if (verify_cmd->parsed()) {
      return run_verify(solution, spec, log);
    }
    return run_eigen(spec, out_dir, log);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace sepwave::cli
