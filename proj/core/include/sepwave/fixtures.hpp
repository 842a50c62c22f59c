#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sepwave/problem.hpp"

/// Ready-made problems: the three-component singular example and its
/// rejection variants, and the scalar wave equation.
namespace sepwave::fixtures {

/// E = [[eps, 0, delta], [0, g, 0], [0, 0, 0]].
CMatrix example_E(Complex eps, Complex g, Complex delta);
/// A = diag(0, delta, sigma).
CMatrix example_A(Complex delta, Complex sigma);

struct ExampleParams {
  Complex eps = 1.0;
  Complex g = 1.0;
  Complex delta = 1.0;
  Complex sigma = 1.0;
  /// Boundary scalars; A2 = [mu a1, mu a2, c] and B2 = eta B1 with alpha = mu,
  /// beta = eta, so only the third column of G(alpha, beta) survives.
  double mu = -0.5;
  double eta = 0.5;
  int N = 8;
  double k = 1.0 / 32.0;
  double T = 1.0;
};

/// F(i) = (x(1-x)/2, sin(pi x), 0), G(i) = (0, cos(pi x), 0) on interior nodes;
/// the end values satisfy the boundary relations.
ProblemSpec singular_example(const ExampleParams& params = {});

enum class Variant {
  Worked,         ///< singular_example with defaults
  Zero,           ///< same matrices, zero data
  BadProjector,   ///< F has a third component outside the projector range
  BadKernel,      ///< Ker G(alpha, beta) shrinks to span{e1} while F keeps e2
  RankFull,       ///< G(alpha, beta) invertible
  RhoDegenerate,  ///< alpha = 2, beta = 1: a zero Sturm-Liouville eigenvalue gives rho = 0
};

ProblemSpec example(Variant variant);
std::optional<Variant> parse_variant(std::string_view name);
std::string_view variant_name(Variant variant);
std::vector<Variant> all_variants();

/// u_tt = c2 u_xx with homogeneous Dirichlet ends, F = sin(pi x), G = 0.
ProblemSpec scalar_wave(int N, double k, double T, double c2 = 1.0);

}  // namespace sepwave::fixtures
