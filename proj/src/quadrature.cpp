#include "voldist/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "voldist/error.hpp"

namespace voldist {

GaussLegendre gauss_legendre(int m) {
  GaussLegendre rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  return rule;
}

double sphere_measure(int N) {
  // 2 pi^{N/2} / Gamma(N/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

SphereRule sphere_rule(int N, int K) {
  if (K < 8) throw Error(ErrorKind::ConfigInvalid, "sphere rule needs at least 8 nodes");
  SphereRule rule;
  rule.N = N;
  if (N == 2) {
    rule.nodes.resize(2, K);
    rule.weights.assign(K, 2.0 * std::numbers::pi / K);
    for (int j = 0; j < K; ++j) {
      const double th = 2.0 * std::numbers::pi * j / K;
      rule.nodes(0, j) = std::cos(th);
      rule.nodes(1, j) = std::sin(th);
    }
    return rule;
  }
  if (N == 3) {
    const int polar = K / 2;
    const GaussLegendre gl = gauss_legendre(polar);
    rule.nodes.resize(3, K * polar);
    rule.weights.reserve(K * polar);
    int col = 0;
    for (int i = 0; i < polar; ++i) {
      const double ct = gl.nodes[i];
      const double st = std::sqrt(1.0 - ct * ct);
      for (int j = 0; j < K; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / K;
        rule.nodes(0, col) = st * std::cos(ph);
        rule.nodes(1, col) = st * std::sin(ph);
        rule.nodes(2, col) = ct;
        rule.weights.push_back(gl.weights[i] * 2.0 * std::numbers::pi / K);
        ++col;
      }
    }
    return rule;
  }
  throw Error(ErrorKind::UnsupportedDimension, "sphere rules exist for N = 2 and N = 3 only");
}

DepthRule depth_rule(double depth, int m) {
  if (!(depth > 0.0)) throw Error(ErrorKind::NonpositiveDepth, "cap depth must be positive");
  const GaussLegendre gl = gauss_legendre(m);
  const double umax = std::sqrt(depth);
  DepthRule rule;
  rule.nodes.reserve(m);
  rule.weights.reserve(m);
  for (int i = 0; i < m; ++i) {
    const double u = 0.5 * umax * (gl.nodes[i] + 1.0);
    rule.nodes.push_back(depth - u * u);
    rule.weights.push_back(gl.weights[i] * 0.5 * umax * 2.0 * u);
  }
  return rule;
}

Rules make_rules(int N, int circle_nodes, int depth_nodes) {
  if (depth_nodes < 2) throw Error(ErrorKind::ConfigInvalid, "depth rule needs at least 2 nodes");
  return {sphere_rule(N, circle_nodes), depth_nodes};
}

}  // namespace voldist
