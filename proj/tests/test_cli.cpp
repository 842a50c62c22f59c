#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "sepwave/fixtures.hpp"
#include "sepwave/problem_io.hpp"

using namespace sepwave;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sepwave");
  std::vector<char*> argv;
  for (auto& a : args) {
    argv.push_back(a.data());
  }
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sepwave_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) { return std::string(SEPWAVE_FIXTURE_DIR) + "/" + name + ".json"; }

}  // namespace

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code(ErrorKind::ShapeError) == cli::kExitInput);
  CHECK(cli::exit_code(ErrorKind::IoError) == cli::kExitInput);
  CHECK(cli::exit_code(ErrorKind::RankFull) == cli::kExitRejected);
  CHECK(cli::exit_code(ErrorKind::ConsistencyViolation) == cli::kExitRejected);
  CHECK(cli::exit_code(ErrorKind::EigendecompositionFailure) == cli::kExitNumerical);
}

TEST_CASE("parse_complex") {
  CHECK(cli::parse_complex("2.5") == Complex(2.5, 0.0));
  CHECK(cli::parse_complex("1,-2") == Complex(1.0, -2.0));
  CHECK_THROWS_AS(cli::parse_complex("x"), Error);
}

TEST_CASE("shipped fixtures match the generator") {
  for (auto v : fixtures::all_variants()) {
    const std::string name(fixtures::variant_name(v));
    CHECK(slurp(fixture(name)) == io::serialize_problem(fixtures::example(v)));
  }
}

TEST_CASE("solve writes deterministic outputs") {
  const fs::path a = temp_dir("solve_a");
  const fs::path b = temp_dir("solve_b");
  CHECK(run({"solve", "--quiet", "--input", fixture("worked"), "--out-dir", a.string()}).code == 0);
  CHECK(run({"solve", "--quiet", "--input", fixture("worked"), "--out-dir", b.string()}).code == 0);
  for (const char* file : {"solution.csv", "eigen.csv", "report.txt"}) {
    REQUIRE(fs::exists(a / file));
    CHECK(slurp(a / file) == slurp(b / file));
  }
  const std::string report = slurp(a / "report.txt");
  CHECK(report.find("[conditions]") != std::string::npos);
  CHECK(report.find("FAIL") == std::string::npos);

  CHECK(run({"verify", "--quiet", "--input", fixture("worked"), "--solution", (a / "solution.csv").string()}).code == 0);
  fs::remove_all(b);

  // Tampering with a single value breaks the difference equations.
  const ProblemSpec spec = io::parse_problem(fixture("worked"));
  SolutionGrid u = io::read_solution_csv(a / "solution.csv", spec.grid, spec.m);
  u.node(4, 10)(1) += 1e-4;
  io::write_solution_csv(u, spec.grid, a / "tampered.csv");
  CHECK(run({"verify", "--quiet", "--input", fixture("worked"), "--solution", (a / "tampered.csv").string()}).code ==
        cli::kExitRejected);
  fs::remove_all(a);
}

TEST_CASE("rejections exit 2 and name the condition") {
  const std::pair<const char*, const char*> cases[] = {
      {"bad-projector", "projector_fixes_data: FAIL"},
      {"bad-kernel", "data_in_boundary_kernel: FAIL"},
      {"rank-full", "rank_deficient_boundary: FAIL"},
      {"rho-degenerate", "rho_nondegenerate: FAIL"},
  };
  for (const auto& [variant, line] : cases) {
    const fs::path dir = temp_dir(variant);
    CHECK(run({"solve", "--quiet", "--input", fixture(variant), "--out-dir", dir.string()}).code == cli::kExitRejected);
    CHECK(slurp(dir / "report.txt").find(line) != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "solution.csv"));
    fs::remove_all(dir);
  }
}

TEST_CASE("input errors exit 3") {
  CHECK(run({"solve", "--input", "/nonexistent.json"}).code == cli::kExitInput);
  CHECK(run({"solve"}).code == cli::kExitInput);
  CHECK(run({"bogus"}).code == cli::kExitInput);
  CHECK(run({"example", "--variant", "nope"}).code == cli::kExitInput);

  const fs::path dir = temp_dir("shape");
  std::ofstream(dir / "bad.json") << "{\"m\": 2, \"E\": [[1]]}";
  const auto r = run({"solve", "--input", (dir / "bad.json").string(), "--out-dir", dir.string()});
  CHECK(r.code == cli::kExitInput);
  fs::remove_all(dir);
}

TEST_CASE("example and eigen subcommands") {
  const auto r = run({"example", "--variant", "zero"});
  CHECK(r.code == 0);
  CHECK(r.out == io::serialize_problem(fixtures::example(fixtures::Variant::Zero)));

  const fs::path dir = temp_dir("eigen");
  CHECK(run({"eigen", "--quiet", "--input", fixture("worked"), "--out-dir", dir.string()}).code == 0);
  CHECK(slurp(dir / "eigen.csv").rfind("l,lambda\n", 0) == 0);
  fs::remove_all(dir);
}
