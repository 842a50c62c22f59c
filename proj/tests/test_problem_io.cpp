#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "sepwave/errors.hpp"
#include "sepwave/fixtures.hpp"
#include "sepwave/problem_io.hpp"
#include "sepwave/solver.hpp"

using namespace sepwave;
namespace fs = std::filesystem;

namespace {

ErrorKind parse_kind(const std::string& text, std::string* message = nullptr) {
  try {
    io::parse_problem_text(text);
  } catch (const Error& e) {
    if (message) {
      *message = e.what();
    }
    return e.kind();
  }
  FAIL("parse unexpectedly succeeded");
  return ErrorKind::IoError;
}

std::string replace_line(const std::string& text, const std::string& key, const std::string& line) {
  const std::string marker = "\"" + key + "\":";
  const auto start = text.find(marker);
  REQUIRE(start != std::string::npos);
  auto line_start = text.rfind('\n', start) + 1;
  const auto end = text.find('\n', start);
  return text.substr(0, line_start) + line + text.substr(end);
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sepwave_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("problem round-trip is exact") {
  for (auto v : fixtures::all_variants()) {
    const ProblemSpec spec = fixtures::example(v);
    const std::string text = io::serialize_problem(spec);
    const ProblemSpec back = io::parse_problem_text(text);
    CHECK(io::serialize_problem(back) == text);
    CHECK(back.E == spec.E);
    CHECK(back.A2 == spec.A2);
    for (int i = 0; i <= spec.grid.N; ++i) {
      CHECK(back.F[i] == spec.F[i]);
      CHECK(back.G[i] == spec.G[i]);
    }
    CHECK(back.grid.k == spec.grid.k);
    CHECK(back.alpha == spec.alpha);
  }
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(io::format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("malformed problems name the key") {
  const std::string good = io::serialize_problem(fixtures::singular_example());
  std::string message;
  CHECK(parse_kind(replace_line(good, "E", "\"E\": [[1, 0], [0, 1]],"), &message) == ErrorKind::ShapeError);
  CHECK(message.find("\"E\"") != std::string::npos);

  CHECK(parse_kind(replace_line(good, "B2", "\"B2\": [[1, 0, 0]],"), &message) == ErrorKind::ShapeError);
  CHECK(message.find("\"B2\"") != std::string::npos);

  CHECK(parse_kind(replace_line(good, "N", "\"N\": 1,")) == ErrorKind::InvalidParameter);
  CHECK(parse_kind(replace_line(good, "k", "\"k\": 0.3,")) == ErrorKind::InvalidParameter);
  CHECK(parse_kind("{ not json") == ErrorKind::ParseError);
  CHECK(parse_kind("{\"m\": 3}") == ErrorKind::ParseError);
}

TEST_CASE("missing file is an IO error") {
  try {
    io::parse_problem("/nonexistent/problem.json");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
}

TEST_CASE("solution CSV round-trip and determinism") {
  const ProblemSpec spec = fixtures::singular_example();
  const auto result = solver::run_pipeline(spec);
  REQUIRE(result.ok());
  const std::string first = io::solution_csv(*result.solution, spec.grid);
  const std::string second = io::solution_csv(*solver::run_pipeline(spec).solution, spec.grid);
  CHECK(first == second);
  CHECK(first.rfind("i,j,x,t,u1_re,u1_im,u2_re,u2_im,u3_re,u3_im\n", 0) == 0);

  const fs::path dir = temp_dir("csv");
  io::write_solution_csv(*result.solution, spec.grid, dir / "u.csv");
  const SolutionGrid back = io::read_solution_csv(dir / "u.csv", spec.grid, spec.m);
  CHECK(back.data() == result.solution->data());

  std::ofstream(dir / "short.csv") << first.substr(0, first.size() / 2);
  CHECK_THROWS_AS(io::read_solution_csv(dir / "short.csv", spec.grid, spec.m), Error);
  fs::remove_all(dir);
}

TEST_CASE("eigen CSV") {
  const auto pairs = sturm_liouville::solve_psd(sturm_liouville::SLProblem::canonical(3, 0.0, 0.0));
  const std::string csv = io::eigen_csv(pairs);
  CHECK(csv.rfind("l,lambda\n1,", 0) == 0);
}
