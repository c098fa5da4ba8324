#include "voldist/section.hpp"

#include <cmath>

#include "voldist/error.hpp"

namespace voldist {

namespace {

constexpr double kTransversality = 1e-8;

double cast_in_plane(const Body& body, const Vec& origin, const Vec& dir) {
  try {
    return ray_cast(body, origin, dir);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoIntersection) throw Error(ErrorKind::DomainExceeded, e.what());
    throw;
  }
}

}  // namespace

SectionProfile section_profile(const Body& body, const PlaneFrame& frame, const SphereRule& rule) {
  const int count = rule.size();
  SectionProfile prof{frame, &rule, std::vector<double>(count), std::vector<double>(count), Mat(frame.ambient_dim(), count)};
  for (int j = 0; j < count; ++j) {
    const Vec dir = frame.basis * rule.nodes.col(j);
    const double r = cast_in_plane(body, frame.p, dir);
    const Vec hit = frame.p + r * dir;
    const Vec normal = body.implicit_gradient(hit).normalized();
    const double along = normal.dot(dir);
    if (std::abs(along) < kTransversality) throw Error(ErrorKind::NotTransversal, "hyperplane is tangent to the surface");
    prof.r[j] = r;
    prof.rz[j] = -normal.dot(frame.n) / along;
    prof.hits.col(j) = hit;
  }
  return prof;
}

SectionMeasures section_measures(const SectionProfile& prof) {
  const SphereRule& rule = *prof.rule;
  const int N = rule.N;
  double b = 0.0;
  Vec moment = Vec::Zero(N);
  Mat hess = Mat::Zero(N, N);
  double slope = 0.0;
  for (int j = 0; j < rule.size(); ++j) {
    const double w = rule.weights[j];
    const double r = prof.r[j];
    const double rN = std::pow(r, N);
    const auto eta = rule.nodes.col(j);
    b += w * rN / N;
    moment += (w * rN * r / (N + 1)) * eta;
    hess.noalias() += (w * rN * r * prof.rz[j]) * (eta * eta.transpose());
    slope += w * prof.rz[j];
  }
  if (!(b > 0.0)) throw Error(ErrorKind::DegenerateSection, "section has no area");
  hess = 0.5 * (hess + hess.transpose());

  SectionMeasures m;
  m.b = b;
  m.centroid_offset = moment / b;
  m.centroid = prof.frame.p + prof.frame.basis * m.centroid_offset;
  m.hessV = hess;
  m.Q = hess / b;
  Eigen::LLT<Mat> llt(hess);
  m.positive_definite = llt.info() == Eigen::Success;
  m.oriented = slope > 0.0;
  return m;
}

double section_area(const Body& body, const PlaneFrame& frame, const Vec& origin, const SphereRule& rule) {
  const int N = rule.N;
  double b = 0.0;
  for (int j = 0; j < rule.size(); ++j) {
    const Vec dir = frame.basis * rule.nodes.col(j);
    b += rule.weights[j] * std::pow(cast_in_plane(body, origin, dir), N) / N;
  }
  return b;
}

}  // namespace voldist
