#pragma once

#include <Eigen/Dense>

namespace voldist {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// x -> linear * x + translation on R^{N+1}. Always invertible.
class AffineMap {
 public:
  /// Zero-dimensional placeholder; assign a real map before use.
  AffineMap() = default;
  AffineMap(Mat linear, Vec translation);

  static AffineMap identity(int dim);
  static AffineMap linear_only(Mat linear);

  const Mat& linear() const { return linear_; }
  const Vec& translation() const { return translation_; }
  const Mat& linear_inverse() const { return linear_inv_; }
  int dim() const { return static_cast<int>(linear_.rows()); }
  double determinant() const { return det_; }

  Vec apply(const Vec& x) const { return linear_ * x + translation_; }
  Vec apply_inverse(const Vec& y) const { return linear_inv_ * (y - translation_); }

  AffineMap inverse() const;
  /// (*this) o inner: first inner, then *this.
  AffineMap after(const AffineMap& inner) const;

 private:
  Mat linear_;
  Vec translation_;
  Mat linear_inv_;
  double det_ = 1.0;
};

/// Oriented orthonormal basis of the complement of `axis`, with
/// det[basis | axis] > 0. Axis-aligned inputs give standard basis vectors.
Mat orthonormal_complement(const Vec& axis);

/// Hyperplane H(n, p) with an orthonormal tangent basis (columns).
struct PlaneFrame {
  Vec p;
  Vec n;
  Mat basis;

  static PlaneFrame from_normal(const Vec& p, const Vec& n);

  int ambient_dim() const { return static_cast<int>(p.size()); }
  int section_dim() const { return static_cast<int>(basis.cols()); }

  /// Same plane orientation data, new origin.
  PlaneFrame moved_to(const Vec& new_p) const;
  /// New normal; the old basis is projected onto the new hyperplane and
  /// re-orthonormalized so that frame coordinates vary smoothly.
  PlaneFrame tilted_to(const Vec& new_n) const;
};

}  // namespace voldist
