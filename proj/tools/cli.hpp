#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "sepwave/errors.hpp"
#include "sepwave/fixtures.hpp"
#include "sepwave/problem.hpp"
#include "sepwave/solver.hpp"
#include "sepwave/verify.hpp"

namespace sepwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitNumerical = 4;

int exit_code(ErrorKind kind);

/// Command-line overrides applied on top of the problem file.
struct Overrides {
  std::optional<double> tol_rank;
  std::optional<double> tol_residual;
  std::optional<Complex> gamma;
};

void apply(const Overrides& overrides, ProblemSpec& spec);

/// Parses "re" or "re,im".
Complex parse_complex(const std::string& text);

std::string format_report(const ProblemSpec& spec, const solver::PipelineResult& result,
                          const std::optional<verify::ResidualReport>& residuals, int exit_status);

/// Writes solution.csv, report.txt and eigen.csv into out_dir. A rejected
/// model still gets report.txt (and eigen.csv when the modes were computed).
int run_solve(const ProblemSpec& spec, const std::filesystem::path& out_dir, std::ostream& log);

/// Replays the finite-difference residuals on a stored solution. Exit 2 when
/// any residual exceeds the residual tolerance.
int run_verify(const std::filesystem::path& solution_csv, const ProblemSpec& spec, std::ostream& log);

/// Writes eigen.csv for the problem's Sturm-Liouville modes.
int run_eigen(const ProblemSpec& spec, const std::filesystem::path& out_dir, std::ostream& log);

/// Emits a fixture problem as JSON, to `output` or to `log` when empty.
int run_example(fixtures::Variant variant, const std::filesystem::path& output, std::ostream& log);

/// Full command-line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sepwave::cli
