#include "voldist/polynomial.hpp"

#include <cassert>
#include <numeric>

namespace voldist {

namespace {

int total_degree(const Polynomial::Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Polynomial Polynomial::constant(int nvars, double value) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), value);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  Polynomial p(nvars);
  Exponent e(nvars, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::affine(const Vec& coeffs, double offset) {
  const int n = static_cast<int>(coeffs.size());
  Polynomial p = constant(n, offset);
  for (int i = 0; i < n; ++i) {
    Exponent e(n, 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

double Polynomial::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponent& e, double c) {
  assert(static_cast<int>(e.size()) == nvars_);
  if (c == 0.0) return;
  terms_[e] += c;
}

Polynomial Polynomial::homogeneous_part(int deg) const {
  Polynomial p(nvars_);
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) == deg) p.terms_.emplace(e, c);
  }
  return p;
}

Polynomial Polynomial::truncated(int max_degree) const {
  Polynomial p(nvars_);
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) <= max_degree) p.terms_.emplace(e, c);
  }
  return p;
}

double Polynomial::operator()(const Vec& x) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) terms_[e] += c;
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) terms_[e] -= c;
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::times(const Polynomial& other, int max_degree) const {
  Polynomial p(nvars_);
  Exponent e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      int deg = 0;
      for (int i = 0; i < nvars_; ++i) {
        e[i] = ea[i] + eb[i];
        deg += e[i];
      }
      if (deg <= max_degree) p.terms_[e] += ca * cb;
    }
  }
  return p;
}

Polynomial Polynomial::compose(std::span<const Polynomial> subs, int max_degree) const {
  assert(static_cast<int>(subs.size()) == nvars_);
  const int out_vars = subs.empty() ? 0 : subs.front().nvars();
  // powers[i][k] = subs[i]^k
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (int i = 0; i < nvars_; ++i) powers[i].push_back(constant(out_vars, 1.0));

  Polynomial result(out_vars);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(out_vars, c);
    for (int i = 0; i < nvars_; ++i) {
      while (static_cast<int>(powers[i].size()) <= e[i]) {
        powers[i].push_back(powers[i].back().times(subs[i], max_degree));
      }
      if (e[i] > 0) term = term.times(powers[i][e[i]], max_degree);
    }
    result += term;
  }
  return result;
}

double Polynomial::derivative_at_zero(std::span<const int> indices) const {
  Exponent e(nvars_, 0);
  for (int i : indices) ++e[i];
  double weight = 1.0;
  for (int k : e) weight *= factorial(k);
  return coefficient(e) * weight;
}

}  // namespace voldist
