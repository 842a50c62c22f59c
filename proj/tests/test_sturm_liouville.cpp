#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sepwave/errors.hpp"
#include "sepwave/sturm_liouville.hpp"

using namespace sepwave;
using namespace sepwave::sturm_liouville;

TEST_CASE("Dirichlet spectrum is 4 sin^2(l pi / 2N)") {
  for (int N : {2, 3, 4, 8, 16, 32, 64}) {
    const auto prob = SLProblem::canonical(N, 0.0, 0.0);
    const auto pairs = solve_psd(prob);
    REQUIRE(pairs.size() == static_cast<std::size_t>(N - 1));
    for (int l = 1; l < N; ++l) {
      const double s = std::sin(l * std::numbers::pi / (2.0 * N));
      CHECK(std::abs(pairs[l - 1].lambda - 4.0 * s * s) <= 1e-9);
    }
    CHECK(orthogonality_defect(pairs, prob) <= 1e-10);
  }
}

TEST_CASE("Dirichlet eigenvectors are discrete sines") {
  const int N = 8;
  const auto pairs = solve_psd(SLProblem::canonical(N, 0.0, 0.0));
  for (int l = 1; l < N; ++l) {
    const auto& v = pairs[l - 1].v;
    RVector s(N - 1);
    for (int i = 1; i < N; ++i) {
      s(i - 1) = std::sin(l * std::numbers::pi * i / N);
    }
    s /= s.norm();
    const double aligned = std::abs(v.dot(s)) / v.norm();
    CHECK(aligned == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pairs[l - 1].v_left == 0.0);
    CHECK(pairs[l - 1].v_right == 0.0);
  }
}

TEST_CASE("assemble_pencil with a Robin corner") {
  const auto prob = SLProblem::canonical(3, 1.0, 0.0);
  CHECK(prob.left_factor() == doctest::Approx(1.5));
  const auto pencil = assemble_pencil(prob);
  REQUIRE(pencil.S.rows() == 2);
  // s(1) - p(0) u(0)/u(1) = 2 - 1.5
  CHECK(pencil.S(0, 0) == doctest::Approx(0.5));
  CHECK(pencil.S(0, 1) == doctest::Approx(-1.0));
  CHECK(pencil.S(1, 1) == doctest::Approx(2.0));
  CHECK(pencil.Rm(0, 0) == 1.0);
}

TEST_CASE("eigenpairs solve the full boundary value problem") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  std::uniform_real_distribution<double> any(-0.4, 0.4);
  for (int t = 0; t < 10; ++t) {
    const int N = 4 + t;
    SLProblem prob;
    prob.N = N;
    prob.alpha = (t % 3 == 0) ? 0.0 : -0.5 + 0.1 * t;
    prob.beta = (t % 2 == 0) ? 0.0 : 0.25;
    prob.p.resize(N);
    prob.q.resize(N - 1);
    prob.r.resize(N - 1);
    for (int i = 0; i < N; ++i) {
      prob.p(i) = pos(rng);
    }
    for (int i = 0; i < N - 1; ++i) {
      prob.q(i) = any(rng);
      prob.r(i) = pos(rng);
    }
    const auto pairs = solve_psd(prob);
    REQUIRE(pairs.size() == static_cast<std::size_t>(N - 1));
    CHECK(orthogonality_defect(pairs, prob) <= 1e-10);
    for (const auto& pair : pairs) {
      const RVector u = pair.extended();
      for (int i = 1; i < N; ++i) {
        const double s = prob.p(i) + prob.p(i - 1) - prob.q(i - 1);
        const double lhs = -prob.p(i - 1) * u(i - 1) + s * u(i) - prob.p(i) * u(i + 1);
        CHECK(std::abs(lhs - pair.lambda * prob.r(i - 1) * u(i)) <= 1e-10 * (1.0 + std::abs(pair.lambda)));
      }
      CHECK(std::abs(u(0) + prob.alpha * N * (u(1) - u(0))) <= 1e-12);
      CHECK(std::abs(u(N) + prob.beta * N * (u(N) - u(N - 1))) <= 1e-12);
    }
    for (std::size_t l = 1; l < pairs.size(); ++l) {
      CHECK(pairs[l - 1].lambda <= pairs[l].lambda);
    }
  }
}

TEST_CASE("expansion round-trip") {
  std::mt19937 rng(13);
  for (int N : {4, 8, 16, 32, 64}) {
    const auto prob = SLProblem::canonical(N, 0.0, 0.0);
    const auto pairs = solve_psd(prob);
    const CVector u = oracle::random_vector(rng, N - 1);
    const CVector back = synthesize(expand(u, pairs, prob), pairs);
    CHECK((back - u).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + u.cwiseAbs().maxCoeff()));

    const CMatrix grid = oracle::random_matrix(rng, N - 1, 3);
    const CMatrix back_grid = synthesize(expand(grid, pairs, prob), pairs);
    CHECK((back_grid - grid).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + grid.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("lift_mode") {
  const auto pairs = solve_psd(SLProblem::canonical(5, 0.0, 0.0));
  CVector R(2);
  R << 1.0, Complex(0.0, 2.0);
  const CMatrix H = lift_mode(pairs[0], R);
  REQUIRE(H.rows() == 6);
  REQUIRE(H.cols() == 2);
  const RVector v = pairs[0].extended();
  for (int i = 0; i <= 5; ++i) {
    CHECK(std::abs(H(i, 0) - v(i)) < 1e-15);
    CHECK(std::abs(H(i, 1) - Complex(0.0, 2.0) * v(i)) < 1e-15);
  }
  CHECK_THROWS_AS(lift_mode(pairs[0], CVector::Zero(2)), Error);
}

TEST_CASE("invalid problems are rejected") {
  auto prob = SLProblem::canonical(4, 0.0, 0.0);
  prob.p(1) = -1.0;
  CHECK_THROWS_AS(prob.validate(), Error);

  // alpha N = 1 makes the left relation independent of u(0).
  const auto degenerate = SLProblem::canonical(4, 0.25, 0.0);
  try {
    degenerate.validate();
    FAIL("expected DegenerateBoundary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateBoundary);
  }
}
