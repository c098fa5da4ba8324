#pragma once

#include <vector>

#include "voldist/geometry.hpp"
#include "voldist/quadrature.hpp"

namespace voldist {

/// Boundary Gamma(n, p) of the section R(n, p), sampled radially from the
/// frame origin along the nodes of a sphere rule.
struct SectionProfile {
  PlaneFrame frame;
  const SphereRule* rule = nullptr;
  std::vector<double> r;   // radius along each node
  std::vector<double> rz;  // d r / d z when the plane is pushed along +n
  Mat hits;                // boundary points, one per column
};

struct SectionMeasures {
  double b = 0.0;          // N-volume of R(n, p)
  Vec centroid;            // ambient
  Vec centroid_offset;     // centroid - p in frame coordinates
  Mat hessV;               // integral of r^{N+1} r_z eta eta^T
  Mat Q;                   // hessV / b
  bool positive_definite = false;
  /// Mean slope is positive: n points away from the cap.
  bool oriented = false;
};

/// The rule must outlive the returned profile.
SectionProfile section_profile(const Body& body, const PlaneFrame& frame, const SphereRule& rule);

SectionMeasures section_measures(const SectionProfile& profile);

/// Area of the section through `origin` parallel to the frame plane; origin
/// must lie inside the section.
double section_area(const Body& body, const PlaneFrame& frame, const Vec& origin, const SphereRule& rule);

}  // namespace voldist
