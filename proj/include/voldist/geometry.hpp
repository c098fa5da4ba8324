#pragma once

#include <array>
#include <memory>
#include <variant>

#include "voldist/polynomial.hpp"
#include "voldist/types.hpp"

namespace voldist {

/// Solid ellipsoid {center + linear * u : |u| <= 1}.
struct Ellipsoid {
  Vec center;
  Mat linear;
  Mat linear_inv;
};

/// Convex region above the graph
///   z = (x^2+y^2)/2 + c/6 (x^3 - 3xy^2)
///       + 1/24 (a40 x^4 + 4 a31 x^3 y + 6 a22 x^2 y^2 + 4 a13 x y^3 + a04 y^4)
/// over the disk x^2 + y^2 < domain_radius^2. The surface is a patch with
/// boundary; rays leaving the disk before meeting it have no hit.
struct QuarticGraph {
  double c = 0.0;
  std::array<double, 5> a{};  // a40, a31, a22, a13, a04
  double domain_radius = 0.8;

  double height(double x, double y) const;
  Eigen::Vector2d gradient(double x, double y) const;
  Eigen::Matrix2d hessian(double x, double y) const;
};

class Body;

struct AffineImage {
  std::shared_ptr<const Body> base;
  AffineMap map;
};

/// A strictly convex body. The boundary M is the zero set of an implicit
/// polynomial that is negative inside; "outward" is the direction of its
/// gradient, away from the convex side.
class Body {
 public:
  using Variant = std::variant<Ellipsoid, QuarticGraph, AffineImage>;

  static Body ellipsoid(const Vec& center, const Mat& linear);
  static Body ball(int dim, double radius = 1.0);
  static Body quartic_graph(double c, const std::array<double, 5>& a, double domain_radius = 0.8);
  static Body paraboloid(double domain_radius = 0.8) { return quartic_graph(0.0, {}, domain_radius); }

  const Variant& variant() const { return v_; }
  int dim() const;
  /// Length scale used for tolerances and finite-difference steps. For the
  /// graph patch this is the domain diameter.
  double diameter() const;

  bool contains(const Vec& x) const;
  /// Outward gradient of the implicit function (not normalized).
  Vec implicit_gradient(const Vec& x) const;
  /// Approximate distance of x to the boundary, used for on-surface checks.
  double boundary_residual(const Vec& x) const;
  Polynomial implicit_polynomial() const;

  /// A point of the body maximizing u . x. Throws UnboundedCap when the
  /// body is unbounded in direction u and DomainExceeded when the extreme
  /// point of a graph patch falls outside its domain.
  Vec support_point(const Vec& u) const;

 private:
  explicit Body(Variant v) : v_(std::move(v)) {}
  friend Body apply_affine(const Body& body, const AffineMap& map);

  Variant v_;
};

/// Distance along a unit direction from an interior origin to the boundary.
double ray_cast(const Body& body, const Vec& origin, const Vec& dir);

/// Unit outward normal at a boundary point.
Vec surface_normal(const Body& body, const Vec& x);

Body apply_affine(const Body& body, const AffineMap& map);

/// Fourth-order jet of the boundary written as a graph z = f(x) over an
/// adapted frame at q: x are coordinates along `tangent` columns, z along
/// `axis` (the inner, convex-side direction). f(0) = 0 and grad f(0) = 0.
struct Jet4 {
  Vec q;
  Mat tangent;
  Vec axis;
  Mat quadratic;         // D^2 f(0)
  Polynomial cubic{0};   // degree-3 part of f
  Polynomial quartic{0}; // degree-4 part of f

  int dim() const { return static_cast<int>(quadratic.rows()); }
  double third(int i, int j, int k) const;
  double fourth(int i, int j, int k, int l) const;
  double operator()(const Vec& x) const;
};

/// Jet in the canonical frame: tangent = orthonormal complement of the
/// inner unit normal.
Jet4 graph_jet4(const Body& body, const Vec& q);
/// Jet over a caller-supplied transversal frame.
Jet4 graph_jet4(const Body& body, const Vec& q, const Mat& tangent, const Vec& axis);

}  // namespace voldist
