#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sepwave/errors.hpp"
#include "sepwave/fixtures.hpp"
#include "sepwave/pencil.hpp"

using namespace sepwave;
using namespace sepwave::pencil;
using matrix_core::one_norm;

namespace {

double entry_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

struct Params {
  Complex lam, eps, g, delta, sigma;
};

}  // namespace

TEST_CASE("example pencil matches its closed forms") {
  const Params cases[] = {
      {1.0, 1.0, 1.0, 1.0, 1.0},
      {2.0, 1.0, 1.0, 1.0, 1.0},
      {1.0, 2.0, 0.5, 3.0, 1.5},
      {-0.7, 1.0, 2.0, 1.0, 1.0},
      {Complex(0.0, 1.0), 1.0, 1.0, 1.0, 1.0},
  };
  for (const auto& c : cases) {
    const CMatrix E = fixtures::example_E(c.eps, c.g, c.delta);
    const CMatrix A = fixtures::example_A(c.delta, c.sigma);
    const auto pd = build_pencil(E, A, c.lam);
    const auto cf = oracle::example_closed_form(c.lam, c.eps, c.g, c.delta, c.sigma);
    CHECK(entry_diff(pd.Ehat, cf.Ehat) <= 1e-12);
    CHECK(entry_diff(pd.Ahat, cf.Ahat) <= 1e-12);
    CHECK(entry_diff(pd.EhatD, cf.EhatD) <= 1e-12);
    CHECK(entry_diff(pd.projector, cf.projector) <= 1e-12);
    CHECK(entry_diff(pd.reduced, cf.reduced) <= 1e-12);
    CHECK(pd.index == 1);
    CHECK(pd.core_dim == 2);
    CHECK(entry_diff(c.lam * pd.Ehat + pd.Ahat, CMatrix::Identity(3, 3)) <= 1e-12);
  }
}

TEST_CASE("identity and zero leading matrices") {
  std::mt19937 rng(53);
  const CMatrix A = oracle::random_matrix(rng, 3, 3);
  const Complex gamma = find_gamma(CMatrix::Identity(3, 3), A);
  const auto pd = build_pencil(CMatrix::Identity(3, 3), A, gamma);
  CHECK(pd.index == 0);
  CHECK(entry_diff(pd.projector, CMatrix::Identity(3, 3)) <= 1e-10);
  // Ehat^D Ahat = E^{-1} A for E = I.
  CHECK(entry_diff(pd.reduced, A) <= 1e-9 * (1.0 + one_norm(A)));

  const auto zero = build_pencil(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2), 0.0);
  CHECK(one_norm(zero.projector) == 0.0);
  CHECK_FALSE(zero.nontrivial_spectrum);
  const auto prop = build_propagators(zero, -0.5);
  CHECK(one_norm(prop.Z0) == 0.0);
  CHECK(one_norm(prop.Z1) == 0.0);
}

TEST_CASE("find_gamma") {
  CHECK(find_gamma(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)) == Complex(1.0, 0.0));
  CHECK(find_gamma(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2)) == Complex(0.0, 0.0));
  // E = I, A = -I: gamma = 1 is singular, the next rung works.
  const Complex g = find_gamma(CMatrix::Identity(2, 2), CMatrix(-CMatrix::Identity(2, 2)));
  CHECK(std::abs(g - 1.0) > 0.1);

  CMatrix E = CMatrix::Zero(2, 2);
  E(0, 0) = 1.0;
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 1.0;
  try {
    find_gamma(E, A);
    FAIL("expected NoRegularizingGamma");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoRegularizingGamma);
  }
  try {
    build_pencil(E, A, 1.0);
    FAIL("expected SingularShift");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularShift);
  }
}

TEST_CASE("propagators of the example pencil") {
  const ProblemSpec spec = fixtures::singular_example();
  const auto pd = build_pencil(spec.E, spec.A, 1.0);
  for (double rho : {-0.01, -0.25, -1.0, -2.5, -3.9}) {
    const auto prop = build_propagators(pd, rho);
    const CMatrix sum = (2.0 * CMatrix::Identity(3, 3) + rho * pd.reduced) * pd.projector;
    CHECK(entry_diff(prop.Z0 + prop.Z1, sum) <= 1e-9);
    CHECK(entry_diff(prop.Z0 * pd.projector, prop.Z0) <= 1e-12);

    Eigen::ComplexEigenSolver<CMatrix> es0(prop.Z0);
    Eigen::ComplexEigenSolver<CMatrix> es1(prop.Z1);
    for (Index i = 0; i < 3; ++i) {
      for (Complex z : {es0.eigenvalues()(i), es1.eigenvalues()(i)}) {
        if (std::abs(z) > 1e-8) {
          CHECK(std::abs(std::abs(z) - 1.0) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("rho = 0 on a nonzero core eigenvalue is rejected") {
  const ProblemSpec spec = fixtures::singular_example();
  const auto pd = build_pencil(spec.E, spec.A, 1.0);
  CHECK(rho_margin(pd, 0.0) == 0.0);
  try {
    build_propagators(pd, 0.0);
    FAIL("expected RhoDegenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RhoDegenerate);
  }
  const auto skipped = build_propagators(pd, 0.0, RhoCheck::Skip);
  CHECK(entry_diff(skipped.Z0, pd.projector) <= 1e-12);
  // rho d = -4 is the other root.
  CHECK(rho_margin(pd, -4.0) <= 1e-12);
  CHECK(rho_margin(pd, -1.0) == doctest::Approx(0.75));
}

TEST_CASE("matrix difference solution satisfies the recurrence") {
  std::mt19937 rng(59);
  const ProblemSpec spec = fixtures::singular_example();
  const auto pd = build_pencil(spec.E, spec.A, 1.0);
  for (double rho : {-0.1, -1.7, -3.0}) {
    const auto prop = build_propagators(pd, rho);
    const CVector l1 = oracle::random_vector(rng, 3);
    const CVector l2 = oracle::random_vector(rng, 3);
    CVector prev = solve_matrix_difference(pd, prop, l1, l2, 0);
    CVector cur = solve_matrix_difference(pd, prop, l1, l2, 1);
    double worst = 0.0;
    for (int j = 1; j <= 200; ++j) {
      const CVector next = solve_matrix_difference(pd, prop, l1, l2, j + 1);
      worst = std::max(worst, one_norm(recurrence_residual(pd, rho, prev, cur, next)));
      prev = cur;
      cur = next;
    }
    CHECK(worst <= 1e-9 * (1.0 + one_norm(l1) + one_norm(l2)));
    // The nilpotent component never enters.
    CHECK(entry_diff(pd.projector * cur, cur) <= 1e-9);
  }
}

TEST_CASE("random regular pencils") {
  std::mt19937 rng(61);
  for (int t = 0; t < 10; ++t) {
    const Index n = 2 + t % 4;
    const CMatrix E = oracle::low_rank(rng, n, n - 1 - t % 2);
    const CMatrix A = oracle::random_matrix(rng, n, n);
    const Complex gamma = find_gamma(E, A);
    const auto pd = build_pencil(E, A, gamma);
    CHECK(entry_diff(gamma * pd.Ehat + pd.Ahat, CMatrix::Identity(n, n)) <= 1e-9);
    CHECK(entry_diff(pd.projector * pd.projector, pd.projector) <= 1e-8 * (1.0 + one_norm(pd.projector)));
    CHECK(entry_diff(pd.Ehat * pd.reduced, pd.reduced * pd.Ehat) <= 1e-8 * (1.0 + one_norm(pd.reduced)));
  }
}
