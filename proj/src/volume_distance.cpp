#include "voldist/volume_distance.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "voldist/error.hpp"

namespace voldist {

namespace {

SectionMeasures measure(const Body& body, const PlaneFrame& frame, const Rules& rules) {
  return section_measures(section_profile(body, frame, rules.sphere));
}

bool recoverable(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotInside:
    case ErrorKind::DomainExceeded:
    case ErrorKind::NotTransversal:
    case ErrorKind::DegenerateSection:
      return true;
    default:
      return false;
  }
}

MinimizingPair make_pair(const PlaneFrame& frame, const SectionMeasures& m, int iterations) {
  MinimizingPair pair;
  pair.frame = frame;
  pair.b = m.b;
  pair.centroid = m.centroid;
  pair.hessV = m.hessV;
  pair.Q = m.Q;
  pair.iterations = iterations;
  pair.residual = m.centroid_offset.norm();
  return pair;
}

}  // namespace

double cap_volume(const Body& body, const PlaneFrame& frame, const Rules& rules) {
  const Vec deepest = body.support_point(-frame.n);
  const double depth = frame.n.dot(frame.p - deepest);
  if (!(depth > 0.0)) throw Error(ErrorKind::NotInside, "plane does not cut the body");
  const DepthRule rule = depth_rule(depth, rules.depth_nodes);
  // Sections are sampled from points of the segment p -> deepest, which lie
  // inside each parallel section by convexity.
  return rule.integrate([&](double zeta) {
    const Vec origin = frame.p + (zeta / depth) * (deepest - frame.p);
    return section_area(body, frame, origin, rules.sphere);
  });
}

Vec grad_V_n(const Body& body, const PlaneFrame& frame, const Rules& rules) {
  const SectionMeasures m = measure(body, frame, rules);
  return -m.b * m.centroid_offset;
}

MinimizingPair minimize_direction(const Body& body, const Vec& p, const Vec& n0, const Rules& rules,
                                  const SolverOptions& opts) {
  const double target = opts.tol * body.diameter();
  PlaneFrame frame = PlaneFrame::from_normal(p, n0);
  SectionMeasures m = measure(body, frame, rules);

  for (int it = 0; it <= opts.max_iterations; ++it) {
    const double residual = m.centroid_offset.norm();
    if (residual <= target) {
      MinimizingPair pair = make_pair(frame, m, it);
      if (opts.compute_volume) pair.V = cap_volume(body, frame, rules);
      return pair;
    }
    if (!m.positive_definite) {
      throw Error(ErrorKind::NotPositiveDefinite, "second variation of V is not positive definite");
    }
    const Vec step = m.hessV.llt().solve(m.b * m.centroid_offset);
    const double merit = m.b * residual;

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 30 && !accepted; ++ls, alpha *= 0.5) {
      const PlaneFrame trial = frame.tilted_to(frame.n + frame.basis * (alpha * step));
      try {
        SectionMeasures mt = measure(body, trial, rules);
        // Near the floor of attainable accuracy the merit stops decreasing
        // monotonically; full Newton steps are taken there.
        if (mt.b * mt.centroid_offset.norm() < merit || residual <= 1e3 * target) {
          frame = trial;
          m = std::move(mt);
          accepted = true;
        }
      } catch (const Error& e) {
        if (!recoverable(e)) throw;
      }
    }
    if (!accepted) throw Error(ErrorKind::MaxIterations, "line search stalled before convergence");
  }
  throw Error(ErrorKind::MaxIterations, "direction solver did not converge");
}

Vec initial_direction(const Body& body, const Vec& p) {
  const int dim = body.dim();
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;

  double best = std::numeric_limits<double>::infinity();
  Vec best_dir;
  auto try_dir = [&](const Vec& d) {
    try {
      const double s = ray_cast(body, p, d);
      if (s < best) {
        best = s;
        best_dir = d;
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotInside) throw;
    }
  };
  for (int k = 0; k < dim; ++k) {
    try_dir(Vec::Unit(dim, k));
    try_dir(-Vec::Unit(dim, k));
  }
  for (int k = 0; k < 512; ++k) {
    Vec d(dim);
    for (int i = 0; i < dim; ++i) d[i] = gauss(rng);
    try_dir(d.normalized());
  }
  if (best_dir.size() == 0) throw Error(ErrorKind::DomainExceeded, "no boundary point visible from p");

  // Foot point refinement: at the nearest point the normal is parallel to
  // the ray, so follow the normal while the distance decreases.
  Vec normal = surface_normal(body, p + best * best_dir);
  for (int it = 0; it < 50; ++it) {
    double s = 0.0;
    try {
      s = ray_cast(body, p, normal);
    } catch (const Error&) {
      break;
    }
    if (!(s < best)) break;
    best = s;
    normal = surface_normal(body, p + s * normal);
  }
  return -normal;
}

VolumeDistance volume_distance(const Body& body, const Vec& p, const Rules& rules, const SolverOptions& opts) {
  return volume_distance(body, p, initial_direction(body, p), rules, opts);
}

VolumeDistance volume_distance(const Body& body, const Vec& p, const Vec& n0, const Rules& rules,
                               const SolverOptions& opts) {
  MinimizingPair pair = minimize_direction(body, p, n0, rules, opts);
  return {pair.V, std::move(pair)};
}

Vec grad_v(const Body& body, const Vec& p, const Rules& rules, const SolverOptions& opts) {
  SolverOptions o = opts;
  o.compute_volume = false;
  const MinimizingPair pair = volume_distance(body, p, rules, o).pair;
  return pair.b * pair.frame.n;
}

HessianV hess_v(const Body& body, const Vec& p, double step, const Rules& rules, const SolverOptions& opts) {
  SolverOptions o = opts;
  o.compute_volume = false;
  return hess_v(body, volume_distance(body, p, rules, o).pair, step, rules, opts);
}

HessianV hess_v(const Body& body, const MinimizingPair& at, double step, const Rules& rules,
                const SolverOptions& opts) {
  SolverOptions o = opts;
  o.compute_volume = false;
  const int dim = body.dim();
  const Vec& p = at.frame.p;
  auto gradient_at = [&](const Vec& x) -> Vec {
    try {
      const MinimizingPair pair = minimize_direction(body, x, at.frame.n, rules, o);
      return pair.b * pair.frame.n;
    } catch (const Error& e) {
      throw Error(ErrorKind::StepTooLarge, std::string("finite-difference stencil left the domain: ") + e.what());
    }
  };

  // Fourth-order central stencil.
  Mat full(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const Vec e = step * Vec::Unit(dim, k);
    full.col(k) = (8.0 * (gradient_at(p + e) - gradient_at(p - e)) - (gradient_at(p + 2.0 * e) - gradient_at(p - 2.0 * e))) /
                  (12.0 * step);
  }
  full = 0.5 * (full + full.transpose()).eval();
  const Mat& E = at.frame.basis;
  return {full, E.transpose() * full * E, at};
}

HessianIdentity hessian_identity_check(const Body& body, const Vec& p, const Rules& rules, const SolverOptions& opts,
                                       double step) {
  if (step <= 0.0) step = 1e-4 * body.diameter();
  const HessianV h = hess_v(body, p, step, rules, opts);
  HessianIdentity out;
  out.lhs = -h.restricted / h.pair.b;
  out.rhs = h.pair.Q.inverse();
  out.rel_err = (out.lhs - out.rhs).norm() / out.rhs.norm();
  return out;
}

}  // namespace voldist
