#pragma once

#include <vector>

#include "voldist/types.hpp"

namespace voldist {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int m);

/// Positive-weight rule on the unit sphere S^{N-1} of a section.
///   N = 2: K-point periodic trapezoidal rule, weights 2 pi / K.
///   N = 3: K uniform azimuths x K/2 Gauss-Legendre nodes in cos(phi).
struct SphereRule {
  int N = 2;
  Mat nodes;               // N x count, unit columns
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

SphereRule sphere_rule(int N, int K);

/// Measure of S^{N-1}.
double sphere_measure(int N);

/// Rule for the integral of g over [0, depth] after the substitution
/// u = sqrt(depth - zeta); exact when g(depth - u^2) * u is a polynomial in
/// u of degree <= 2m - 1.
struct DepthRule {
  std::vector<double> nodes;   // zeta values in (0, depth)
  std::vector<double> weights;

  template <class F>
  double integrate(F&& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * g(nodes[i]);
    return sum;
  }
};

DepthRule depth_rule(double depth, int m);

/// Sphere and depth discretization shared by the section and volume code.
struct Rules {
  SphereRule sphere;
  int depth_nodes = 64;
};

Rules make_rules(int N, int circle_nodes = 256, int depth_nodes = 64);

}  // namespace voldist
