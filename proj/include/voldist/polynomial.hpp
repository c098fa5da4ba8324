#pragma once

#include <map>
#include <span>
#include <vector>

#include "voldist/types.hpp"

namespace voldist {

/// Sparse multivariate polynomial with exact term bookkeeping. Used to carry
/// the implicit equations of the bodies through affine maps and to expand
/// boundary graphs; never on a hot path.
class Polynomial {
 public:
  using Exponent = std::vector<int>;

  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double value);
  static Polynomial variable(int nvars, int index);
  /// offset + sum_i coeffs[i] * x_i
  static Polynomial affine(const Vec& coeffs, double offset);

  int nvars() const { return nvars_; }
  int degree() const;
  const std::map<Exponent, double>& terms() const { return terms_; }

  double coefficient(const Exponent& e) const;
  void add_term(const Exponent& e, double c);

  Polynomial homogeneous_part(int deg) const;
  Polynomial truncated(int max_degree) const;

  double operator()(const Vec& x) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  /// Product with all terms above max_degree dropped.
  Polynomial times(const Polynomial& other, int max_degree) const;
  /// Substitute x_i -> subs[i] (all in the same variable set), truncated.
  Polynomial compose(std::span<const Polynomial> subs, int max_degree) const;

  /// d^k p / dx_{i1}...dx_{ik} at the origin.
  double derivative_at_zero(std::span<const int> indices) const;

 private:
  int nvars_;
  std::map<Exponent, double> terms_;
};

}  // namespace voldist
