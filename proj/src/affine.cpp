#include "voldist/affine.hpp"

#include <cmath>

#include "voldist/error.hpp"

namespace voldist {

namespace {

/// Unimodular adapted frame at q before the N = 2 cubic rotation: the
/// tangent map `shape` (x = shape * y), and the affine normal.
struct AdaptedFrame {
  Jet4 jet;
  Mat shape;
  Vec xi;
  double mu = 1.0;  // axis component of xi
};

AdaptedFrame adapted_frame(const Body& body, const Vec& q) {
  AdaptedFrame f{graph_jet4(body, q), {}, {}, 1.0};
  const Jet4& jet = f.jet;
  const int N = jet.dim();
  const Mat& H = jet.quadratic;

  Eigen::SelfAdjointEigenSolver<Mat> eig(H);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw Error(ErrorKind::NotConvex, "graph Hessian is not positive definite");
  const double detH = eig.eigenvalues().prod();
  f.mu = std::pow(detH, 1.0 / (N + 2));
  const double s = std::pow(detH, 0.5 / (N + 2));
  const Mat inv_sqrt = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                       eig.eigenvectors().transpose();
  f.shape = s * inv_sqrt;

  // Cubic in the scaled coordinates, C(By, By, By) / mu, and its trace.
  Vec trace = Vec::Zero(N);
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < N; ++i) {
      double sum = 0.0;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          for (int c = 0; c < N; ++c) sum += jet.third(a, b, c) * f.shape(a, i) * f.shape(b, i) * f.shape(c, k);
      trace[k] += sum / f.mu;
    }
  }
  // The shear x -> x + u z adds 3 sym(v (x) I) with v = B^T H u / mu to the
  // cubic tensor; its trace is (N + 2) v.
  const Vec v = -trace / (N + 2);
  const Vec u = f.mu * H.ldlt().solve(f.shape.transpose().fullPivLu().solve(v));
  f.xi = jet.tangent * u + f.mu * jet.axis;
  return f;
}

AffineMap frame_map(const Vec& q, const Mat& tangent, const Mat& shape, const Vec& xi) {
  const int n = static_cast<int>(q.size());
  Mat M(n, n);
  M << tangent * shape, xi;
  return AffineMap(M, q).inverse();
}

Jet4 standard_jet(const Body& normalized) {
  const int n = normalized.dim();
  return graph_jet4(normalized, Vec::Zero(n), Mat::Identity(n, n - 1), Vec::Unit(n, n - 1));
}

}  // namespace

Mat blaschke_metric(const Jet4& jet) {
  const Mat& H = jet.quadratic;
  Eigen::SelfAdjointEigenSolver<Mat> eig(H);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw Error(ErrorKind::NotConvex, "graph Hessian is not positive definite");
  return std::pow(eig.eigenvalues().prod(), -1.0 / (jet.dim() + 2)) * H;
}

Vec affine_normal(const Body& body, const Vec& q) { return adapted_frame(body, q).xi; }

Vec conormal(const Body& body, const Vec& q) {
  const AdaptedFrame f = adapted_frame(body, q);
  return f.jet.axis / f.mu;
}

Body normalized_body(const Body& body, const NormalForm& nf) { return apply_affine(body, nf.T); }

NormalForm unimodular_frame(const Body& body, const Vec& q) {
  const AdaptedFrame f = adapted_frame(body, q);
  NormalForm nf;
  nf.q = q;
  nf.tangent = f.jet.tangent;
  nf.axis = f.jet.axis;
  nf.T = frame_map(q, f.jet.tangent, f.shape, f.xi);
  nf.to_original = f.shape;
  nf.normalized_jet = standard_jet(apply_affine(body, nf.T));
  nf.h = blaschke_metric(f.jet);
  nf.xi = f.xi;
  nf.nu = f.jet.axis / f.mu;
  return nf;
}

NormalForm normalize_at(const Body& body, const Vec& q) {
  if (body.dim() != 3) throw Error(ErrorKind::UnsupportedDimension, "normal form rotation is implemented for N = 2");
  const AdaptedFrame f = adapted_frame(body, q);

  // Rotate so the (harmonic) cubic reads c cos(3 theta) with c >= 0.
  const Jet4 first = standard_jet(apply_affine(body, frame_map(q, f.jet.tangent, f.shape, f.xi)));
  const double phi = std::atan2(first.third(0, 0, 1), first.third(0, 0, 0)) / 3.0;
  Mat rot(2, 2);
  rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);

  NormalForm nf;
  nf.q = q;
  nf.tangent = f.jet.tangent;
  nf.axis = f.jet.axis;
  nf.T = frame_map(q, f.jet.tangent, f.shape * rot, f.xi);
  nf.to_original = f.shape * rot;
  nf.normalized_jet = standard_jet(apply_affine(body, nf.T));
  const Jet4& jn = nf.normalized_jet;
  nf.c = jn.third(0, 0, 0);
  nf.quartic = {jn.fourth(0, 0, 0, 0), jn.fourth(0, 0, 0, 1), jn.fourth(0, 0, 1, 1), jn.fourth(0, 1, 1, 1),
                jn.fourth(1, 1, 1, 1)};
  nf.h = blaschke_metric(f.jet);
  nf.xi = f.xi;
  nf.nu = f.jet.axis / f.mu;

  const ShapeForm sf = shape_form(nf);
  nf.A = sf.A;
  nf.hS = sf.hS;
  nf.hS_normalized = sf.hS_normalized;
  return nf;
}

ShapeForm shape_form(const NormalForm& nf) {
  if (nf.to_original.rows() != 2) throw Error(ErrorKind::UnsupportedDimension, "shape form formula is for N = 2");
  const double c2 = 0.5 * nf.c * nf.c;
  const auto& a = nf.quartic;
  Mat A(2, 2);
  A << c2 - 0.25 * (a[0] + a[2]), -0.25 * (a[1] + a[3]), -0.25 * (a[1] + a[3]), c2 - 0.25 * (a[2] + a[4]);
  const Mat back = nf.to_original.inverse();
  return {A, back.transpose() * (-A) * back, -A};
}

}  // namespace voldist
