#include <doctest.h>

#include "test_util.hpp"
#include "voldist/asympt.hpp"
#include "voldist/error.hpp"

using namespace voldist;
using namespace testutil;

namespace {

const Rules& rules2() {
  static const Rules r = make_rules(2);
  return r;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ConfigInvalid;
}

const Body& c1() {
  static const Body b = Body::quartic_graph(1.0, {});
  return b;
}

const Body& c1_a40() {
  static const Body b = Body::quartic_graph(1.0, {1, 0, 0, 0, 0});
  return b;
}

}  // namespace

TEST_CASE("fit_order and geometric_ladder") {
  const std::vector<double> ts = geometric_ladder(0.2, 0.5, 6);
  REQUIRE(ts.size() == 6);
  CHECK(ts[0] == 0.2);
  CHECK(ts[5] == doctest::Approx(0.2 / 32.0).epsilon(1e-15));
  std::vector<double> quad, zero;
  for (double t : ts) {
    quad.push_back(3.0 * t * t);
    zero.push_back(1e-16);
  }
  const OrderFit q = fit_order(ts, quad, 1e-14);
  CHECK_FALSE(q.vanishing);
  CHECK(q.exponent == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit_order(ts, zero, 1e-14).vanishing);
}

TEST_CASE("centroid curve reference values") {
  SUBCASE("unit sphere") {
    const Vec d = v3(0.3, -0.2, 0.9).normalized();
    const CentroidCurveSample s = centroid_curve(Body::ball(3), d, 0.1, rules2());
    CHECK(s.Z.norm() <= 1e-12);
    CHECK((s.gamma - s.gamma.dot(d) * d).norm() <= 1e-12);
  }
  SUBCASE("paraboloid") {
    const CentroidCurveSample s = centroid_curve(Body::paraboloid(), v3(0, 0, 0), 0.1, rules2());
    CHECK(s.Z.norm() <= 1e-12);
  }
  SUBCASE("c = 1 surface") {
    std::vector<double> ts = geometric_ladder(0.1, 0.5, 7), zs;
    for (double t : ts) {
      const CentroidCurveSample s = centroid_curve(c1(), v3(0, 0, 0), t, rules2());
      CHECK(std::abs(s.Z[2]) <= 1e-12);
      zs.push_back(s.Z.norm());
    }
    const OrderFit fit = fit_order(ts, zs, 1e-13);
    CHECK((fit.vanishing || fit.exponent >= 1.9));
  }
  SUBCASE("Z is tangent and quadratic at a generic point") {
    const auto& g = std::get<QuarticGraph>(c1_a40().variant());
    const Vec q = v3(0.1, -0.05, g.height(0.1, -0.05));
    const NormalForm nf = normalize_at(c1_a40(), q);
    std::vector<double> ts = geometric_ladder(0.05, 0.5, 6), zs;
    for (double t : ts) {
      const CentroidCurveSample s = centroid_curve(c1_a40(), nf, t, rules2());
      CHECK(std::abs(s.Z.dot(nf.axis)) <= 1e-12);
      zs.push_back(s.Z.norm());
    }
    const OrderFit fit = fit_order(ts, zs, 1e-13);
    CHECK_FALSE(fit.vanishing);
    CHECK(fit.exponent >= 1.9);
  }
}

TEST_CASE("Q ladders of the exact surfaces") {
  const std::vector<double> ts = {0.2, 0.1, 0.05, 0.025};
  SUBCASE("unit sphere is exactly linear") {
    const Body ball = Body::ball(3);
    const NormalForm nf = normalize_at(ball, v3(0, 0, -1));
    const ExpansionFit fit = fit_expansion(q_ladder(ball, nf, ts, rules2()));
    for (std::size_t k = 0; k < ts.size(); ++k) CHECK(max_abs(fit.Qs[k] - (1.0 - ts[k]) * Mat::Identity(2, 2)) <= 1e-10);
    CHECK(max_abs(fit.Q0 - Mat::Identity(2, 2)) <= 1e-10);
    CHECK(max_abs(fit.Q1 + Mat::Identity(2, 2)) <= 1e-9);
    for (double r : fit.residuals) CHECK(r <= 1e-9);
  }
  SUBCASE("paraboloid is exactly constant") {
    const Body par = Body::paraboloid();
    const NormalForm nf = normalize_at(par, v3(0, 0, 0));
    const ExpansionFit fit = fit_expansion(q_ladder(par, nf, ts, rules2()));
    for (const Mat& Q : fit.Qs) CHECK(max_abs(Q - Mat::Identity(2, 2)) <= 1e-10);
    CHECK(max_abs(fit.Q0 - Mat::Identity(2, 2)) <= 1e-10);
    CHECK(max_abs(fit.Q1) <= 1e-9);
  }
}

TEST_CASE("Q ladder of the c = 1 surface") {
  const NormalForm nf = normalize_at(c1(), v3(0, 0, 0));
  const double reach = admissible_reach(normalized_body(c1(), nf), rules2());
  const ExpansionFit fit = fit_expansion(q_ladder(c1(), nf, geometric_ladder(0.2 * reach, 0.5, 8), rules2()));
  CHECK(max_abs(fit.Q0 - Mat::Identity(2, 2)) <= 1e-6);
  CHECK((fit.Q1 - 0.5 * Mat::Identity(2, 2)).norm() <= 0.02 * (0.5 * Mat::Identity(2, 2)).norm());
  CHECK(fit.order_resid.exponent >= 1.8);
  for (const Mat& Q : fit.Qs) CHECK(max_abs(Q - Q.transpose()) <= 1e-12);
}

TEST_CASE("fit_expansion rejects short or unordered ladders") {
  const Body par = Body::paraboloid();
  const NormalForm nf = normalize_at(par, v3(0, 0, 0));
  const std::vector<double> short_ts = {0.1, 0.05, 0.025};
  CHECK(kind_of([&] { fit_expansion(q_ladder(par, nf, short_ts, rules2())); }) == ErrorKind::InsufficientLadder);
  const std::vector<double> unordered = {0.1, 0.05, 0.06, 0.025};
  CHECK(kind_of([&] { fit_expansion(q_ladder(par, nf, unordered, rules2())); }) == ErrorKind::InsufficientLadder);
}

TEST_CASE("rate reports") {
  SUBCASE("unit sphere") {
    const RateReport rep = check_rate_theorem(Body::ball(3), v3(0, 0, -1), rules2());
    CHECK(rep.q1_err_abs <= 1e-8);
    CHECK(rep.q0_err <= 1e-10);
    CHECK(rep.q1_err_plus_hS == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("c = 1 surface") {
    const RateReport rep = check_rate_theorem(c1(), v3(0, 0, 0), rules2());
    CHECK(rep.q1_err_minus_hS <= 0.02);
    CHECK(rep.q0_err <= 1e-5);
    CHECK(rep.order_first.exponent >= 0.9);
    CHECK(rep.order_second.exponent >= 1.8);
  }
  SUBCASE("c = 1, a40 = 1") {
    const RateReport rep = check_rate_theorem(c1_a40(), v3(0, 0, 0), rules2());
    Mat expected(2, 2);
    expected << 0.25, 0, 0, 0.5;
    CHECK((rep.fit.Q1 - expected).norm() <= 0.02 * expected.norm());
    CHECK(rep.q1_err_minus_hS <= 0.02);
    CHECK(rep.order_second.exponent >= 1.8);
  }
  SUBCASE("requires a surface in three dimensions") {
    CHECK(kind_of([&] { check_rate_theorem(Body::ball(4), -Vec::Unit(4, 3), make_rules(3, 16, 16)); }) ==
          ErrorKind::UnsupportedDimension);
  }
}

TEST_CASE("diagonal ratio") {
  const std::vector<double> ts = geometric_ladder(0.1, 0.5, 6);
  SUBCASE("symmetric bodies") {
    const DiagonalReport ball = check_diagonal(Body::ball(3), v3(0, 0, -1), ts, rules2());
    for (double r : ball.ratios) CHECK(r <= 1e-7);
    const DiagonalReport par = check_diagonal(Body::paraboloid(), v3(0, 0, 0), ts, rules2());
    for (double r : par.ratios) CHECK(r <= 1e-7);
  }
  SUBCASE("c = 1, a40 = 1 decays at first order") {
    const DiagonalReport rep = check_diagonal(c1_a40(), v3(0, 0, 0), ts, rules2());
    CHECK_FALSE(rep.decay.vanishing);
    CHECK(rep.decay.exponent >= 0.9);
  }
}

TEST_CASE("conormal gradient identity") {
  CHECK(check_grad_conormal(Body::ball(3), v3(0, 0, -1), 0.1, rules2()) <= 1e-6);
  CHECK(check_grad_conormal(Body::paraboloid(), v3(0, 0, 0), 0.1, rules2()) <= 1e-6);
  for (double t : geometric_ladder(0.1, 0.5, 4)) {
    CHECK(check_grad_conormal(c1(), v3(0, 0, 0), t, rules2()) <= 1e-4);
    CHECK(check_grad_conormal(c1_a40(), v3(0, 0, 0), t, rules2()) <= 1e-4);
  }
}
