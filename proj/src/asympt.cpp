#include "voldist/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "voldist/error.hpp"

namespace voldist {

namespace {

constexpr double kExactFloor = 1e-10;   // quadrature-level exactness of Q
constexpr double kCentroidFloor = 1e-13;

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

PlaneFrame horizontal_frame(int dim, double t) {
  Vec origin = Vec::Zero(dim);
  origin[dim - 1] = t;
  return {origin, Vec::Unit(dim, dim - 1), Mat::Identity(dim, dim - 1)};
}

NormalForm frame_for(const Body& body, const Vec& q) {
  return body.dim() == 3 ? normalize_at(body, q) : unimodular_frame(body, q);
}

}  // namespace

OrderFit fit_order(std::span<const double> ts, std::span<const double> values, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(values[i] > floor)) continue;
    const double x = std::log(ts[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return {std::numeric_limits<double>::infinity(), true};
  return {(n * sxy - sx * sy) / (n * sxx - sx * sx), false};
}

std::vector<double> geometric_ladder(double t0, double ratio, int count) {
  std::vector<double> ts;
  for (int k = 0; k < count; ++k) ts.push_back(t0 * std::pow(ratio, k));
  return ts;
}

double admissible_reach(const Body& normalized, const Rules& rules) {
  const int dim = normalized.dim();
  const SphereRule coarse = sphere_rule(rules.sphere.N, 32);
  auto admissible = [&](double t) {
    const PlaneFrame frame = horizontal_frame(dim, t);
    if (!normalized.contains(frame.p)) return false;
    try {
      section_profile(normalized, frame, coarse);
      return true;
    } catch (const Error&) {
      return false;
    }
  };

  double hi = 0.0;
  try {
    hi = normalized.support_point(Vec::Unit(dim, dim - 1))[dim - 1];
  } catch (const Error&) {
    hi = normalized.diameter();
  }
  if (admissible(hi)) return hi;
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return lo;
}

CentroidCurveSample centroid_curve(const Body& body, const NormalForm& nf, double t, const Rules& rules) {
  const PlaneFrame frame{nf.q + t * nf.xi, nf.axis, nf.tangent};
  const SectionMeasures m = section_measures(section_profile(body, frame, rules.sphere));
  CentroidCurveSample s;
  s.t = t;
  s.gamma = m.centroid;
  s.Z = m.centroid - nf.q - t * nf.xi;
  s.Z_tangent = nf.tangent.transpose() * s.Z;
  s.b = m.b;
  return s;
}

CentroidCurveSample centroid_curve(const Body& body, const Vec& q, double t, const Rules& rules) {
  return centroid_curve(body, unimodular_frame(body, q), t, rules);
}

ExpansionFit q_ladder(const Body& body, const NormalForm& nf, std::span<const double> ts, const Rules& rules) {
  const Body normalized = normalized_body(body, nf);
  const int dim = normalized.dim();
  ExpansionFit fit;
  for (double t : ts) {
    const PlaneFrame frame = horizontal_frame(dim, t);
    const SectionMeasures first = section_measures(section_profile(normalized, frame, rules.sphere));
    const SectionMeasures m = section_measures(section_profile(normalized, frame.moved_to(first.centroid), rules.sphere));
    fit.ts.push_back(t);
    fit.Qs.push_back(m.Q);
    fit.bs.push_back(m.b);
    fit.centroids.push_back(first.centroid.head(dim - 1));
  }
  return fit;
}

ExpansionFit fit_expansion(ExpansionFit fit) {
  const int count = static_cast<int>(fit.ts.size());
  if (count < 4) throw Error(ErrorKind::InsufficientLadder, "expansion fit needs at least 4 ladder points");
  for (int k = 1; k < count; ++k) {
    if (!(fit.ts[k] < fit.ts[k - 1])) throw Error(ErrorKind::InsufficientLadder, "ladder must be strictly decreasing");
  }

  fit.fit_points = std::max(4, count / 2);
  const int first = count - fit.fit_points;
  double st = 0, stt = 0;
  Mat sq = Mat::Zero(fit.Qs[0].rows(), fit.Qs[0].cols());
  Mat stq = sq;
  for (int k = first; k < count; ++k) {
    st += fit.ts[k];
    stt += fit.ts[k] * fit.ts[k];
    sq += fit.Qs[k];
    stq += fit.ts[k] * fit.Qs[k];
  }
  const double n = fit.fit_points;
  const double det = n * stt - st * st;
  fit.Q1 = (n * stq - st * sq) / det;
  fit.Q0 = (sq - st * fit.Q1) / n;

  fit.residuals.clear();
  for (int k = 0; k < count; ++k) fit.residuals.push_back((fit.Qs[k] - fit.Q0 - fit.ts[k] * fit.Q1).norm());
  // The fitted linear part absorbs the second-order term on the fit points,
  // so the residual order is read off the remaining (coarser) points.
  if (first >= 2) {
    fit.order_resid = fit_order(std::span(fit.ts).first(first), std::span(fit.residuals).first(first), kExactFloor);
  } else {
    fit.order_resid = fit_order(fit.ts, fit.residuals, kExactFloor);
  }

  if (!fit.centroids.empty()) {
    std::vector<double> offsets;
    for (const Vec& c : fit.centroids) offsets.push_back(c.norm());
    fit.order_Z = fit_order(fit.ts, offsets, kCentroidFloor);
  }
  return fit;
}

RateReport check_rate_theorem(const Body& body, const Vec& q, const Rules& rules, const LadderSpec& ladder) {
  RateReport rep;
  rep.nf = normalize_at(body, q);
  double t0 = ladder.t0;
  if (t0 <= 0.0) t0 = 0.2 * admissible_reach(normalized_body(body, rep.nf), rules);
  const std::vector<double> ts = geometric_ladder(t0, ladder.ratio, ladder.count);
  rep.fit = fit_expansion(q_ladder(body, rep.nf, ts, rules));

  const int N = static_cast<int>(rep.fit.Q0.rows());
  const Mat I = Mat::Identity(N, N);
  std::vector<double> first, second;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    first.push_back((rep.fit.Qs[k] - I).norm());
    second.push_back((rep.fit.Qs[k] - I - ts[k] * rep.nf.A).norm());
  }
  rep.q0_err = max_abs(rep.fit.Q0 - I);
  rep.order_first = fit_order(ts, first, kExactFloor);
  rep.order_second = fit_order(ts, second, kExactFloor);

  const Mat& hS = rep.nf.hS_normalized;
  rep.q1_err_abs = (rep.fit.Q1 + hS).norm();
  const double scale = hS.norm();
  rep.q1_err_minus_hS = scale > 0.0 ? rep.q1_err_abs / scale : rep.q1_err_abs;
  rep.q1_err_plus_hS = scale > 0.0 ? (rep.fit.Q1 - hS).norm() / scale : (rep.fit.Q1 - hS).norm();
  return rep;
}

CurveDerivatives curve_derivatives(const Body& body, const NormalForm& nf, double t, const Rules& rules,
                                   const SolverOptions& opts) {
  CurveDerivatives d;
  d.t = t;
  d.sample = centroid_curve(body, nf, t, rules);

  SolverOptions with_volume = opts;
  with_volume.compute_volume = true;
  d.pair = minimize_direction(body, d.sample.gamma, nf.axis, rules, with_volume);
  d.v = d.pair.V;

  const double dt = 1e-5 * t;
  auto v_at = [&](double s) {
    return minimize_direction(body, centroid_curve(body, nf, s, rules).gamma, nf.axis, rules, with_volume).V;
  };
  d.v_t = (v_at(t + dt) - v_at(t - dt)) / (2.0 * dt);
  d.Dv = d.pair.b * d.pair.frame.n;

  // Stencil scaled with the height of gamma above the tangent plane.
  const double step = 1e-2 * t * nf.axis.dot(nf.xi);
  const HessianV hess = hess_v(body, d.pair, step, rules, opts);
  const Vec hxi = hess.full * nf.xi;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < nf.tangent.cols(); ++i) worst = std::max(worst, std::abs(nf.tangent.col(i).dot(hxi)));
  d.diag_ratio = worst / (std::abs(d.v_t) * nf.xi.norm());
  d.conormal_err = (d.Dv - d.v_t * nf.nu).norm() / d.Dv.norm();
  return d;
}

DiagonalReport check_diagonal(const Body& body, const Vec& q, std::span<const double> ts, const Rules& rules,
                              const SolverOptions& opts) {
  const NormalForm nf = frame_for(body, q);
  DiagonalReport rep;
  for (double t : ts) {
    rep.ts.push_back(t);
    rep.ratios.push_back(curve_derivatives(body, nf, t, rules, opts).diag_ratio);
  }
  rep.decay = fit_order(rep.ts, rep.ratios, 1e-7);
  return rep;
}

double check_grad_conormal(const Body& body, const Vec& q, double t, const Rules& rules, const SolverOptions& opts) {
  return curve_derivatives(body, frame_for(body, q), t, rules, opts).conormal_err;
}

}  // namespace voldist
