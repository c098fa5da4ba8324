#pragma once

#include "voldist/section.hpp"

namespace voldist {

struct SolverOptions {
  /// Converged when |centroid - p| <= tol * diameter.
  double tol = 1e-12;
  int max_iterations = 50;
  /// Skip the cap volume at the converged pair (derivative-only callers).
  bool compute_volume = true;
};

/// Converged critical pair (n(p), p): p is the centroid of R(n, p).
struct MinimizingPair {
  PlaneFrame frame;
  double V = 0.0;
  double b = 0.0;
  Vec centroid;
  Mat hessV;
  Mat Q;
  int iterations = 0;
  double residual = 0.0;
};

/// Volume of the cap U(n, p) on the -n side of the frame plane.
double cap_volume(const Body& body, const PlaneFrame& frame, const Rules& rules);

/// dV/dn in frame coordinates: -b (centroid - p).
Vec grad_V_n(const Body& body, const PlaneFrame& frame, const Rules& rules);

/// Newton iteration on the sphere of directions in the chart
/// n(w) = normalize(n + E w), with the section integral as model Hessian.
MinimizingPair minimize_direction(const Body& body, const Vec& p, const Vec& n0, const Rules& rules,
                                  const SolverOptions& opts = {});

/// Starting direction: minus the outward normal at the (approximately)
/// nearest boundary point.
Vec initial_direction(const Body& body, const Vec& p);

struct VolumeDistance {
  double v = 0.0;
  MinimizingPair pair;
};

VolumeDistance volume_distance(const Body& body, const Vec& p, const Rules& rules, const SolverOptions& opts = {});
VolumeDistance volume_distance(const Body& body, const Vec& p, const Vec& n0, const Rules& rules,
                               const SolverOptions& opts = {});

/// Dv(p) = b n at the minimizing pair.
Vec grad_v(const Body& body, const Vec& p, const Rules& rules, const SolverOptions& opts = {});

struct HessianV {
  Mat full;        // (N+1) x (N+1), ambient coordinates
  Mat restricted;  // N x N, frame basis of H(p)
  MinimizingPair pair;
};

/// Fourth-order central differences of grad_v with warm-started solves;
/// the stencil reaches p +- 2 step.
HessianV hess_v(const Body& body, const Vec& p, double step, const Rules& rules, const SolverOptions& opts = {});
HessianV hess_v(const Body& body, const MinimizingPair& at, double step, const Rules& rules,
                const SolverOptions& opts = {});

struct HessianIdentity {
  Mat lhs;  // -(1/b) D^2 v restricted to H(p)
  Mat rhs;  // Q^{-1}
  double rel_err = 0.0;
};

/// step <= 0 selects 1e-4 * diameter.
HessianIdentity hessian_identity_check(const Body& body, const Vec& p, const Rules& rules,
                                       const SolverOptions& opts = {}, double step = 0.0);

}  // namespace voldist
