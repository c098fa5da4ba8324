#include "voldist/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "voldist/error.hpp"

namespace voldist {

namespace {

constexpr int kJetDegree = 4;

double largest_singular_value(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double cast_ellipsoid(const Ellipsoid& e, const Vec& origin, const Vec& dir) {
  const Vec u0 = e.linear_inv * (origin - e.center);
  const Vec du = e.linear_inv * dir;
  const double qa = du.squaredNorm();
  const double qb = u0.dot(du);
  const double qc = u0.squaredNorm() - 1.0;
  if (qc >= 0.0) throw Error(ErrorKind::NotInside, "ray origin is not inside the ellipsoid");
  const double root = std::sqrt(qb * qb - qa * qc);
  // Stable branch of the positive root.
  return qb >= 0.0 ? -qc / (qb + root) : (root - qb) / qa;
}

double cast_graph(const QuarticGraph& g, const Vec& origin, const Vec& dir) {
  const double ox = origin[0], oy = origin[1], oz = origin[2];
  const double dx = dir[0], dy = dir[1], dz = dir[2];
  const double r2 = g.domain_radius * g.domain_radius;
  if (ox * ox + oy * oy >= r2 || oz <= g.height(ox, oy)) {
    throw Error(ErrorKind::NotInside, "ray origin is not above the graph patch");
  }

  auto phi = [&](double s) { return g.height(ox + s * dx, oy + s * dy) - (oz + s * dz); };
  auto dphi = [&](double s) { return g.gradient(ox + s * dx, oy + s * dy).dot(Eigen::Vector2d(dx, dy)) - dz; };

  const double qa = dx * dx + dy * dy;
  if (qa == 0.0) {
    if (dz >= 0.0) throw Error(ErrorKind::NoIntersection, "vertical ray never meets the graph");
    return (oz - g.height(ox, oy)) / (-dz);
  }
  const double qb = ox * dx + oy * dy;
  const double qc = ox * ox + oy * oy - r2;
  const double s_exit = (std::sqrt(qb * qb - qa * qc) - qb) / qa;
  if (phi(s_exit) < 0.0) throw Error(ErrorKind::NoIntersection, "ray leaves the graph domain before the surface");

  // phi is convex along the ray with phi(0) < 0 <= phi(s_exit): Newton from
  // the right end is monotone; the bracket guards against roundoff.
  double lo = 0.0, hi = s_exit, s = s_exit;
  for (int it = 0; it < 200; ++it) {
    const double val = phi(s);
    if (val == 0.0) return s;
    (val > 0.0 ? hi : lo) = s;
    double next = s - val / dphi(s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-16 * std::max(1.0, s)) return next;
    s = next;
  }
  return s;
}

Vec graph_support_point(const QuarticGraph& g, const Vec& u) {
  if (u[2] > 0.0) throw Error(ErrorKind::UnboundedCap, "graph region is unbounded in the requested direction");
  if (u[2] == 0.0) throw Error(ErrorKind::DomainExceeded, "horizontal support direction reaches the domain rim");
  const Eigen::Vector2d slope(u[0] / -u[2], u[1] / -u[2]);
  // maximize slope.x - f(x): Newton on the convex function f(x) - slope.x
  auto merit = [&](const Eigen::Vector2d& x) { return g.height(x[0], x[1]) - slope.dot(x); };
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  for (int it = 0; it < 100; ++it) {
    const Eigen::Vector2d grad = g.gradient(x[0], x[1]) - slope;
    if (grad.norm() <= 1e-15 * (1.0 + slope.norm())) break;
    const Eigen::Matrix2d hess = g.hessian(x[0], x[1]);
    Eigen::LLT<Eigen::Matrix2d> llt(hess);
    if (llt.info() != Eigen::Success || x.norm() >= g.domain_radius) {
      throw Error(ErrorKind::DomainExceeded, "support point search left the convex domain");
    }
    const Eigen::Vector2d step = -llt.solve(grad);
    double alpha = 1.0;
    const double m0 = merit(x);
    while (alpha > 1e-12 && merit(x + alpha * step) > m0 + 1e-4 * alpha * grad.dot(step)) alpha *= 0.5;
    const Eigen::Vector2d next = x + alpha * step;
    if ((next - x).norm() <= 1e-16 * (1.0 + x.norm())) {
      x = next;
      break;
    }
    x = next;
  }
  if (x.norm() >= g.domain_radius) throw Error(ErrorKind::DomainExceeded, "support point lies outside the graph domain");
  Vec p(3);
  p << x[0], x[1], g.height(x[0], x[1]);
  return p;
}

void validate_convexity(const QuarticGraph& g) {
  constexpr int kRadial = 64;
  constexpr int kAngular = 64;
  for (int i = 0; i < kRadial; ++i) {
    const double r = g.domain_radius * i / (kRadial - 1);
    for (int j = 0; j < kAngular; ++j) {
      const double th = 2.0 * std::numbers::pi * j / kAngular;
      const Eigen::Matrix2d h = g.hessian(r * std::cos(th), r * std::sin(th));
      if (!(h(0, 0) > 0.0 && h.determinant() > 0.0)) {
        throw Error(ErrorKind::NotConvex, "graph Hessian is not positive definite on the domain");
      }
    }
  }
}

}  // namespace

double QuarticGraph::height(double x, double y) const {
  const double x2 = x * x, y2 = y * y;
  return 0.5 * (x2 + y2) + c / 6.0 * (x2 * x - 3.0 * x * y2) +
         (a[0] * x2 * x2 + 4.0 * a[1] * x2 * x * y + 6.0 * a[2] * x2 * y2 + 4.0 * a[3] * x * y2 * y + a[4] * y2 * y2) /
             24.0;
}

Eigen::Vector2d QuarticGraph::gradient(double x, double y) const {
  const double x2 = x * x, y2 = y * y;
  return {x + 0.5 * c * (x2 - y2) + (a[0] * x2 * x + 3.0 * a[1] * x2 * y + 3.0 * a[2] * x * y2 + a[3] * y2 * y) / 6.0,
          y - c * x * y + (a[1] * x2 * x + 3.0 * a[2] * x2 * y + 3.0 * a[3] * x * y2 + a[4] * y2 * y) / 6.0};
}

Eigen::Matrix2d QuarticGraph::hessian(double x, double y) const {
  const double x2 = x * x, y2 = y * y, xy = x * y;
  const double fxx = 1.0 + c * x + 0.5 * (a[0] * x2 + 2.0 * a[1] * xy + a[2] * y2);
  const double fxy = -c * y + 0.5 * (a[1] * x2 + 2.0 * a[2] * xy + a[3] * y2);
  const double fyy = 1.0 - c * x + 0.5 * (a[2] * x2 + 2.0 * a[3] * xy + a[4] * y2);
  Eigen::Matrix2d h;
  h << fxx, fxy, fxy, fyy;
  return h;
}

Body Body::ellipsoid(const Vec& center, const Mat& linear) {
  const AffineMap check(linear, center);
  return Body(Ellipsoid{center, linear, check.linear_inverse()});
}

Body Body::ball(int dim, double radius) { return ellipsoid(Vec::Zero(dim), radius * Mat::Identity(dim, dim)); }

Body Body::quartic_graph(double c, const std::array<double, 5>& a, double domain_radius) {
  if (!(domain_radius > 0.0)) throw Error(ErrorKind::ConfigInvalid, "graph domain radius must be positive");
  QuarticGraph g{c, a, domain_radius};
  validate_convexity(g);
  return Body(g);
}

int Body::dim() const {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) return static_cast<int>(b.center.size());
        else if constexpr (std::is_same_v<T, QuarticGraph>) return 3;
        else return b.base->dim();
      },
      v_);
}

double Body::diameter() const {
  return std::visit(
      [](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) return 2.0 * largest_singular_value(b.linear);
        else if constexpr (std::is_same_v<T, QuarticGraph>) return 2.0 * b.domain_radius;
        else return largest_singular_value(b.map.linear()) * b.base->diameter();
      },
      v_);
}

bool Body::contains(const Vec& x) const {
  return std::visit(
      [&](const auto& b) -> bool {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return (b.linear_inv * (x - b.center)).squaredNorm() < 1.0;
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          return x[0] * x[0] + x[1] * x[1] < b.domain_radius * b.domain_radius && x[2] > b.height(x[0], x[1]);
        } else {
          return b.base->contains(b.map.apply_inverse(x));
        }
      },
      v_);
}

Vec Body::implicit_gradient(const Vec& x) const {
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return b.linear_inv.transpose() * (b.linear_inv * (x - b.center));
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          const Eigen::Vector2d g = b.gradient(x[0], x[1]);
          Vec out(3);
          out << g[0], g[1], -1.0;
          return out;
        } else {
          return b.map.linear_inverse().transpose() * b.base->implicit_gradient(b.map.apply_inverse(x));
        }
      },
      v_);
}

double Body::boundary_residual(const Vec& x) const {
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return std::abs((b.linear_inv * (x - b.center)).norm() - 1.0) * largest_singular_value(b.linear);
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          const double rr = std::hypot(x[0], x[1]);
          if (rr > b.domain_radius * (1.0 + 1e-12)) return std::numeric_limits<double>::infinity();
          return std::abs(b.height(x[0], x[1]) - x[2]) / std::sqrt(1.0 + b.gradient(x[0], x[1]).squaredNorm());
        } else {
          return b.base->boundary_residual(b.map.apply_inverse(x)) * largest_singular_value(b.map.linear());
        }
      },
      v_);
}

Polynomial Body::implicit_polynomial() const {
  return std::visit(
      [&](const auto& b) -> Polynomial {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          const int n = static_cast<int>(b.center.size());
          const Vec offset = -b.linear_inv * b.center;
          Polynomial f = Polynomial::constant(n, -1.0);
          for (int i = 0; i < n; ++i) {
            const Polynomial ui = Polynomial::affine(b.linear_inv.row(i).transpose(), offset[i]);
            f += ui.times(ui, 2);
          }
          return f;
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          Polynomial f(3);
          f.add_term({2, 0, 0}, 0.5);
          f.add_term({0, 2, 0}, 0.5);
          f.add_term({3, 0, 0}, b.c / 6.0);
          f.add_term({1, 2, 0}, -b.c / 2.0);
          f.add_term({4, 0, 0}, b.a[0] / 24.0);
          f.add_term({3, 1, 0}, b.a[1] / 6.0);
          f.add_term({2, 2, 0}, b.a[2] / 4.0);
          f.add_term({1, 3, 0}, b.a[3] / 6.0);
          f.add_term({0, 4, 0}, b.a[4] / 24.0);
          f.add_term({0, 0, 1}, -1.0);
          return f;
        } else {
          const Mat& inv = b.map.linear_inverse();
          const Vec offset = -inv * b.map.translation();
          std::vector<Polynomial> subs;
          for (Eigen::Index i = 0; i < inv.rows(); ++i) {
            subs.push_back(Polynomial::affine(inv.row(i).transpose(), offset[i]));
          }
          return b.base->implicit_polynomial().compose(subs, kJetDegree);
        }
      },
      v_);
}

Vec Body::support_point(const Vec& u) const {
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          const Vec w = b.linear.transpose() * u;
          return b.center + b.linear * (w / w.norm());
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          return graph_support_point(b, u);
        } else {
          return b.map.apply(b.base->support_point(b.map.linear().transpose() * u));
        }
      },
      v_);
}

double ray_cast(const Body& body, const Vec& origin, const Vec& dir) {
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return cast_ellipsoid(b, origin, dir);
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          return cast_graph(b, origin, dir);
        } else {
          const Vec base_dir = b.map.linear_inverse() * dir;
          const double stretch = base_dir.norm();
          return ray_cast(*b.base, b.map.apply_inverse(origin), base_dir / stretch) / stretch;
        }
      },
      body.variant());
}

Vec surface_normal(const Body& body, const Vec& x) {
  const double residual = body.boundary_residual(x);
  if (!(residual <= 1e-9 * std::max(1.0, body.diameter()))) {
    throw Error(ErrorKind::NotOnSurface, "point is not on the boundary");
  }
  return body.implicit_gradient(x).normalized();
}

Body apply_affine(const Body& body, const AffineMap& map) {
  return std::visit(
      [&](const auto& b) -> Body {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return Body::ellipsoid(map.apply(b.center), map.linear() * b.linear);
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          return Body(AffineImage{std::make_shared<const Body>(body), map});
        } else {
          return Body(AffineImage{b.base, map.after(b.map)});
        }
      },
      body.variant());
}

double Jet4::third(int i, int j, int k) const {
  const int idx[] = {i, j, k};
  return cubic.derivative_at_zero(idx);
}

double Jet4::fourth(int i, int j, int k, int l) const {
  const int idx[] = {i, j, k, l};
  return quartic.derivative_at_zero(idx);
}

double Jet4::operator()(const Vec& x) const { return 0.5 * x.dot(quadratic * x) + cubic(x) + quartic(x); }

Jet4 graph_jet4(const Body& body, const Vec& q) {
  const Vec axis = -surface_normal(body, q);
  return graph_jet4(body, q, orthonormal_complement(axis), axis);
}

Jet4 graph_jet4(const Body& body, const Vec& q, const Mat& tangent, const Vec& axis) {
  if (!(body.boundary_residual(q) <= 1e-9 * std::max(1.0, body.diameter()))) {
    throw Error(ErrorKind::NotOnSurface, "jet base point is not on the boundary");
  }
  const int n = body.dim();
  const int N = n - 1;

  // G(y, z) = F(q + tangent y + axis z)
  std::vector<Polynomial> frame_subs;
  for (int i = 0; i < n; ++i) {
    Vec coeffs(n);
    coeffs << tangent.row(i).transpose(), axis[i];
    frame_subs.push_back(Polynomial::affine(coeffs, q[i]));
  }
  const Polynomial G = body.implicit_polynomial().compose(frame_subs, kJetDegree);
  Polynomial::Exponent ez(n, 0);
  ez[N] = 1;
  const double gz = G.coefficient(ez);
  if (gz == 0.0) throw Error(ErrorKind::NotConvex, "jet axis is tangent to the surface");

  // Order-by-order solution of G(y, f(y)) = 0.
  Polynomial f(N);
  for (int d = 2; d <= kJetDegree; ++d) {
    std::vector<Polynomial> subs;
    for (int k = 0; k < N; ++k) subs.push_back(Polynomial::variable(N, k));
    subs.push_back(f);
    const Polynomial residual = G.compose(subs, d);
    f -= (1.0 / gz) * residual.homogeneous_part(d);
  }

  Jet4 jet;
  jet.q = q;
  jet.tangent = tangent;
  jet.axis = axis;
  jet.quadratic = Mat(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const int idx[] = {i, j};
      jet.quadratic(i, j) = f.derivative_at_zero(idx);
    }
  }
  jet.cubic = f.homogeneous_part(3);
  jet.quartic = f.homogeneous_part(4);

  Eigen::SelfAdjointEigenSolver<Mat> eig(jet.quadratic);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw Error(ErrorKind::NotConvex, "boundary is not strictly convex at q");
  return jet;
}

}  // namespace voldist
