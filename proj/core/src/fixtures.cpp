#include "sepwave/fixtures.hpp"

#include <cmath>
#include <numbers>

namespace sepwave::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix example_A1() {
  CMatrix a1(3, 3);
  a1 << 1.0, 0.5, 1.0, 0.25, 1.0, 2.0, 0.5, 0.2, 1.0;
  return a1;
}

CMatrix example_B1() {
  CMatrix b1(3, 3);
  b1 << 2.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 3.0;
  return b1;
}

}  // namespace

CMatrix example_E(Complex eps, Complex g, Complex delta) {
  CMatrix e = CMatrix::Zero(3, 3);
  e(0, 0) = eps;
  e(0, 2) = delta;
  e(1, 1) = g;
  return e;
}

CMatrix example_A(Complex delta, Complex sigma) {
  CMatrix a = CMatrix::Zero(3, 3);
  a(1, 1) = delta;
  a(2, 2) = sigma;
  return a;
}

ProblemSpec singular_example(const ExampleParams& params) {
  ProblemSpec spec;
  spec.m = 3;
  spec.E = example_E(params.eps, params.g, params.delta);
  spec.A = example_A(params.delta, params.sigma);
  spec.A1 = example_A1();
  spec.A2 = params.mu * spec.A1;
  spec.A2.col(2) << 0.5, 1.0, 3.0;
  spec.B1 = example_B1();
  spec.B2 = params.eta * spec.B1;
  spec.alpha = params.mu;
  spec.beta = params.eta;
  spec.grid = make_grid(params.N, params.k, params.T);
  for (int i = 0; i <= params.N; ++i) {
    const double x = spec.grid.x(i);
    CVector f(3);
    f << 0.5 * x * (1.0 - x), std::sin(kPi * x), 0.0;
    CVector g(3);
    g << 0.0, std::cos(kPi * x), 0.0;
    spec.F.push_back(f);
    spec.G.push_back(g);
  }
  // End values follow the boundary relations so the data is compatible at i = 0, N.
  const double n = params.N;
  const double left = params.mu * n / (params.mu * n - 1.0);
  const double right = params.eta * n / (1.0 + params.eta * n);
  for (auto* values : {&spec.F, &spec.G}) {
    values->front() = left * (*values)[1];
    values->back() = right * (*values)[static_cast<std::size_t>(params.N - 1)];
  }
  return spec;
}

ProblemSpec example(Variant variant) {
  switch (variant) {
    case Variant::Worked:
      return singular_example();
    case Variant::Zero: {
      ProblemSpec spec = singular_example();
      for (auto& v : spec.F) v.setZero();
      for (auto& v : spec.G) v.setZero();
      return spec;
    }
    case Variant::BadProjector: {
      ProblemSpec spec = singular_example();
      for (int i = 0; i <= spec.grid.N; ++i) {
        spec.F[static_cast<std::size_t>(i)](2) = 0.25 * std::sin(kPi * spec.grid.x(i));
      }
      return spec;
    }
    case Variant::BadKernel: {
      ProblemSpec spec = singular_example();
      CVector shift(3);
      shift << 0.3, -0.2, 0.1;
      spec.A2.col(1) += shift;
      return spec;
    }
    case Variant::RankFull: {
      ProblemSpec spec = singular_example();
      spec.A2 = spec.alpha * spec.A1 + CMatrix::Identity(3, 3);
      return spec;
    }
    case Variant::RhoDegenerate: {
      ExampleParams params;
      params.mu = 2.0;
      params.eta = 1.0;
      return singular_example(params);
    }
  }
  return singular_example();
}

std::string_view variant_name(Variant variant) {
  switch (variant) {
    case Variant::Worked:
      return "worked";
    case Variant::Zero:
      return "zero";
    case Variant::BadProjector:
      return "bad-projector";
    case Variant::BadKernel:
      return "bad-kernel";
    case Variant::RankFull:
      return "rank-full";
    case Variant::RhoDegenerate:
      return "rho-degenerate";
  }
  return "worked";
}

std::vector<Variant> all_variants() {
  return {Variant::Worked,    Variant::Zero,     Variant::BadProjector,
          Variant::BadKernel, Variant::RankFull, Variant::RhoDegenerate};
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : all_variants()) {
    if (variant_name(v) == name) {
      return v;
    }
  }
  return std::nullopt;
}

ProblemSpec scalar_wave(int N, double k, double T, double c2) {
  ProblemSpec spec;
  spec.m = 1;
  spec.E = CMatrix::Identity(1, 1);
  spec.A = CMatrix::Constant(1, 1, c2);
  spec.A1 = CMatrix::Identity(1, 1);
  spec.A2 = CMatrix::Zero(1, 1);
  spec.B1 = CMatrix::Identity(1, 1);
  spec.B2 = CMatrix::Zero(1, 1);
  spec.grid = make_grid(N, k, T);
  for (int i = 0; i <= N; ++i) {
    spec.F.push_back(CVector::Constant(1, std::sin(kPi * spec.grid.x(i))));
    spec.G.push_back(CVector::Zero(1));
  }
  return spec;
}

}  // namespace sepwave::fixtures
