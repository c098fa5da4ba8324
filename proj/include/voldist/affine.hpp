#pragma once

#include <array>

#include "voldist/geometry.hpp"

namespace voldist {

/// Blaschke normal form of the boundary at q.
///
/// Tangent quantities are stored twice: in the orthonormal tangent basis
/// `tangent` at q ("original frame") and in the normalized coordinates where
/// the surface reads z = r^2/2 + (c/6) cos(3 theta) r^3 + P4(theta) r^4 / 24.
/// Original tangent coordinates x and normalized ones y satisfy x = to_original * y.
struct NormalForm {
  Vec q;
  Mat tangent;        // orthonormal basis of T_qM
  Vec axis;           // inner unit normal
  AffineMap T;        // ambient -> normalized coordinates
  Mat to_original;    // N x N
  double c = 0.0;
  std::array<double, 5> quartic{};  // a40, a31, a22, a13, a04 of the normalized jet
  Jet4 normalized_jet;
  Mat h;              // Blaschke metric, original frame
  Vec xi;             // affine normal (ambient)
  Vec nu;             // conormal (ambient covector)
  Mat A;              // z-slope of Q in normalized coordinates
  Mat hS;             // shape form, original frame
  Mat hS_normalized;  // shape form in normalized coordinates (= -A)
};

/// (det D^2 f)^{-1/(N+2)} D^2 f.
Mat blaschke_metric(const Jet4& jet);

/// Equiaffine normal: transversal direction making the cubic of the graph
/// apolar, scaled so that det(h-orthonormal tangent frame, xi) = 1.
Vec affine_normal(const Body& body, const Vec& q);

/// nu(xi) = 1, nu(T_qM) = 0.
Vec conormal(const Body& body, const Vec& q);

/// Unimodular adapted frame for any N: fills q, tangent, axis, T, to_original,
/// normalized_jet, h, xi and nu. The cubic is made apolar but not rotated; c, quartic, A and
/// the shape forms are left empty.
NormalForm unimodular_frame(const Body& body, const Vec& q);

/// Requires N = 2 (the cubic is rotated to c cos(3 theta), c >= 0).
NormalForm normalize_at(const Body& body, const Vec& q);

struct ShapeForm {
  Mat A;
  Mat hS;
  Mat hS_normalized;
};

/// A = [[c^2/2 - (a40+a22)/4, -(a31+a13)/4], [-(a31+a13)/4, c^2/2 - (a22+a04)/4]],
/// h_S = -A, pulled back to the original frame.
ShapeForm shape_form(const NormalForm& nf);

/// Body expressed in the normalized coordinates of nf.
Body normalized_body(const Body& body, const NormalForm& nf);

}  // namespace voldist
