#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sepwave/problem.hpp"
#include "sepwave/sturm_liouville.hpp"

/// JSON problem files and CSV outputs.
///
/// Problem file keys: "m", "E", "A", "A1", "A2", "B1", "B2" (row-major nested
/// arrays), "alpha", "beta", "N", "k", "T", "F", "G" (N+1 vectors of length m),
/// optional "gamma", "tolerances" {"rank", "residual", "consistency",
/// "max_condition"} and "rho_override" (number or N-1 numbers). A complex
/// entry is either a number or a [re, im] pair.
namespace sepwave::io {

/// Throws ParseError, ShapeError, NonFiniteValue or InvalidParameter. Shape
/// messages name the offending key.
ProblemSpec parse_problem_text(const std::string& text);
/// As above; IoError when the file cannot be read.
ProblemSpec parse_problem(const std::filesystem::path& path);

/// One top-level key per line; every complex entry is written as [re, im].
std::string serialize_problem(const ProblemSpec& spec);
void write_problem(const ProblemSpec& spec, const std::filesystem::path& path);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

/// Header i,j,x,t,u1_re,u1_im,...; rows ordered by j then i.
std::string solution_csv(const SolutionGrid& u, const GridParams& grid);
void write_solution_csv(const SolutionGrid& u, const GridParams& grid, const std::filesystem::path& path);
/// Throws ParseError or ShapeError when the file does not match the grid.
SolutionGrid read_solution_csv(const std::filesystem::path& path, const GridParams& grid, Index m);

/// Header l,lambda with l starting at 1.
std::string eigen_csv(const std::vector<sturm_liouville::EigenPair>& pairs);

/// Writes `content` to `path`; IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace sepwave::io
