#include "voldist/types.hpp"

#include <cmath>

#include "voldist/error.hpp"

namespace voldist {

AffineMap::AffineMap(Mat linear, Vec translation)
    : linear_(std::move(linear)), translation_(std::move(translation)) {
  if (linear_.rows() != linear_.cols() || translation_.size() != linear_.rows()) {
    throw Error(ErrorKind::SingularMap, "affine map has inconsistent dimensions");
  }
  Eigen::PartialPivLU<Mat> lu(linear_);
  det_ = lu.determinant();
  const double scale = std::pow(std::max(linear_.norm(), 1e-300), static_cast<double>(linear_.rows()));
  if (!std::isfinite(det_) || std::abs(det_) <= 1e-14 * scale) {
    throw Error(ErrorKind::SingularMap, "linear part has zero determinant");
  }
  linear_inv_ = lu.inverse();
}

AffineMap AffineMap::identity(int dim) { return {Mat::Identity(dim, dim), Vec::Zero(dim)}; }

AffineMap AffineMap::linear_only(Mat linear) {
  const auto dim = linear.rows();
  return {std::move(linear), Vec::Zero(dim)};
}

AffineMap AffineMap::inverse() const { return {linear_inv_, -linear_inv_ * translation_}; }

AffineMap AffineMap::after(const AffineMap& inner) const {
  return {linear_ * inner.linear_, linear_ * inner.translation_ + translation_};
}

Mat orthonormal_complement(const Vec& axis) {
  const int dim = static_cast<int>(axis.size());
  const Vec a = axis.normalized();
  Eigen::Index skip = 0;
  a.cwiseAbs().maxCoeff(&skip);

  Mat basis(dim, dim - 1);
  int col = 0;
  for (int k = 0; k < dim; ++k) {
    if (k == skip) continue;
    Vec v = Vec::Unit(dim, k);
    v -= a.dot(v) * a;
    for (int j = 0; j < col; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    basis.col(col++) = v.normalized();
  }
  Mat full(dim, dim);
  full << basis, a;
  if (full.determinant() < 0.0) basis.col(dim - 2) *= -1.0;
  return basis;
}

PlaneFrame PlaneFrame::from_normal(const Vec& p, const Vec& n) {
  const Vec unit = n.normalized();
  return {p, unit, orthonormal_complement(unit)};
}

PlaneFrame PlaneFrame::moved_to(const Vec& new_p) const { return {new_p, n, basis}; }

PlaneFrame PlaneFrame::tilted_to(const Vec& new_n) const {
  const Vec unit = new_n.normalized();
  Mat e = basis;
  for (Eigen::Index i = 0; i < e.cols(); ++i) {
    Vec v = e.col(i) - unit.dot(e.col(i)) * unit;
    for (Eigen::Index j = 0; j < i; ++j) v -= e.col(j).dot(v) * e.col(j);
    e.col(i) = v.normalized();
  }
  return {p, unit, e};
}

}  // namespace voldist
