// One pass/fail line per acceptance criterion; exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "voldist/affine.hpp"
#include "voldist/asympt.hpp"
#include "voldist/error.hpp"
#include "voldist/volume_distance.hpp"

using namespace voldist;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!ok) detail << " FAILED[" << what << "]";
  }
  template <class T>
  void note(const std::string& key, const T& value) {
    detail << ' ' << key << '=' << value;
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, <= 0 for none
  std::function<void(Outcome&)> body;
};

const Rules& rules() {
  static const Rules r = make_rules(2);
  return r;
}

Body c1() { return Body::quartic_graph(1.0, {}); }
Body c1_a40() { return Body::quartic_graph(1.0, {1, 0, 0, 0, 0}); }

void sphere_exact(Outcome& out) {
  const Body ball = Body::ball(3);
  const VolumeDistance vd = volume_distance(ball, v3(0.5, 0, 0), rules());
  const Vec Dv = grad_v(ball, v3(0.5, 0, 0), rules());
  const double v_err = std::abs(vd.v - 0.6544984694978736);
  const double b_err = std::abs(vd.pair.b - 0.75 * kPi);
  const double q_err = max_abs(vd.pair.Q - 0.5 * Mat::Identity(2, 2));
  const double d_err = max_abs(Dv - 0.75 * kPi * v3(-1, 0, 0));
  out.note("v", sci(vd.v));
  out.note("v_err", sci(v_err));
  out.note("b_err", sci(b_err));
  out.note("Q_err", sci(q_err));
  out.note("Dv_err", sci(d_err));
  out.require(v_err <= 1e-8, "v");
  out.require(b_err <= 1e-9, "b");
  out.require(q_err <= 1e-9, "Q");
  out.require(d_err <= 1e-8, "Dv");
}

void hessian_identity(Outcome& out) {
  struct Case {
    const char* name;
    Body body;
    Vec p;
  };
  const std::vector<Case> cases = {
      {"ball", Body::ball(3), v3(0.5, 0, 0)},
      {"paraboloid", Body::paraboloid(), v3(0, 0, 0.08)},
      {"c1", c1(), centroid_curve(c1(), v3(0, 0, 0), 0.05, rules()).gamma},
  };
  for (const Case& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    const HessianIdentity hid = hessian_identity_check(c.body, c.p, rules());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.note(std::string(c.name) + "_rel_err", sci(hid.rel_err));
    out.require(hid.rel_err <= 1e-4, c.name);
    out.require(secs < 10.0, std::string(c.name) + " time");
  }
}

void rate_first_order(Outcome& out) {
  struct Case {
    const char* name;
    Body body;
    Vec q;
  };
  const std::vector<Case> cases = {
      {"sphere", Body::ball(3), v3(0, 0, -1)}, {"paraboloid", Body::paraboloid(), v3(0, 0, 0)}, {"c1", c1(), v3(0, 0, 0)}};
  for (const Case& c : cases) {
    const RateReport rep = check_rate_theorem(c.body, c.q, rules());
    out.note(std::string(c.name) + "_Q0_err", sci(rep.q0_err));
    out.note(std::string(c.name) + "_order",
             rep.order_first.vanishing ? std::string("vanishing") : sci(rep.order_first.exponent));
    out.require(rep.q0_err <= 1e-5, std::string(c.name) + " Q0");
    out.require(rep.order_first.vanishing || rep.order_first.exponent >= 0.9, std::string(c.name) + " order");
  }
}

void example_slope(Outcome& out) {
  struct Case {
    const char* name;
    Body body;
    Mat A;
  };
  Mat A1 = 0.5 * Mat::Identity(2, 2);
  Mat A2(2, 2);
  A2 << 0.25, 0, 0, 0.5;
  const std::vector<Case> cases = {{"c1", c1(), A1}, {"c1_a40", c1_a40(), A2}};
  for (const Case& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    const RateReport rep = check_rate_theorem(c.body, v3(0, 0, 0), rules());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double rel = (rep.fit.Q1 - c.A).norm() / c.A.norm();
    out.note(std::string(c.name) + "_Q1", "[" + sci(rep.fit.Q1(0, 0)) + "," + sci(rep.fit.Q1(0, 1)) + ";" +
                                              sci(rep.fit.Q1(1, 0)) + "," + sci(rep.fit.Q1(1, 1)) + "]");
    out.note(std::string(c.name) + "_rel", sci(rel));
    out.note(std::string(c.name) + "_order2", sci(rep.order_second.exponent));
    out.require(rel <= 0.02, std::string(c.name) + " Q1");
    out.require(rep.order_second.exponent >= 1.8, std::string(c.name) + " order2");
    out.require(secs < 60.0, std::string(c.name) + " time");
  }
}

void rate_shape(Outcome& out) {
  for (const auto& [name, body] : {std::pair{"c1", c1()}, std::pair{"c1_a40", c1_a40()}}) {
    const RateReport rep = check_rate_theorem(body, v3(0, 0, 0), rules());
    out.note(std::string(name) + "_Q1+hS", sci(rep.q1_err_minus_hS));
    out.note(std::string(name) + "_Q1-hS", sci(rep.q1_err_plus_hS));
    out.require(rep.q1_err_minus_hS <= 0.02, name);
  }
  const Body ball = Body::ball(3);
  const NormalForm nf = normalize_at(ball, v3(0, 0, -1));
  const std::vector<double> ts = {0.2, 0.1, 0.05, 0.025};
  const ExpansionFit fit = q_ladder(ball, nf, ts, rules());
  double ladder_err = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k)
    ladder_err = std::max(ladder_err, max_abs(fit.Qs[k] - (1.0 - ts[k]) * Mat::Identity(2, 2)));
  const double hs_err = max_abs(nf.hS_normalized - Mat::Identity(2, 2));
  out.note("sphere_ladder_err", sci(ladder_err));
  out.note("sphere_hS_err", sci(hs_err));
  out.require(ladder_err <= 1e-9, "sphere ladder");
  out.require(hs_err <= 1e-8, "sphere hS");
  double family_err = 0.0;
  for (double R : {0.5, 1.0, 2.0, 4.0}) {
    const NormalForm f = normalize_at(Body::ball(3, R), v3(0, 0, -R));
    family_err = std::max(family_err, max_abs(f.hS_normalized - std::pow(R, -1.5) * Mat::Identity(2, 2)));
  }
  out.note("family_hS_err", sci(family_err));
  out.require(family_err <= 1e-8, "sphere family");
}

void diagonal(Outcome& out) {
  const std::vector<double> ts = geometric_ladder(0.1, 0.5, 6);
  for (const auto& [name, body, q] : {std::tuple{"sphere", Body::ball(3), v3(0, 0, -1)},
                                      std::tuple{"paraboloid", Body::paraboloid(), v3(0, 0, 0)},
                                      std::tuple{"c1", c1(), v3(0, 0, 0)}}) {
    const DiagonalReport rep = check_diagonal(body, q, ts, rules());
    const double worst = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    out.note(std::string(name) + "_max_ratio", sci(worst));
    out.require(worst <= 1e-7, name);
  }
  const DiagonalReport rep = check_diagonal(c1_a40(), v3(0, 0, 0), ts, rules());
  out.note("c1_a40_ratio_t0.1", sci(rep.ratios.front()));
  out.note("c1_a40_decay", rep.decay.vanishing ? std::string("vanishing") : sci(rep.decay.exponent));
  out.require(!rep.decay.vanishing && rep.decay.exponent >= 0.9, "c1_a40 decay");
}

void conormal_identity(Outcome& out) {
  const Body ell = Body::ellipsoid(v3(0, 0, 0), (Mat(3, 3) << 1, 0, 0, 0, 1, 0, 0, 0, 2).finished());
  const std::vector<double> ts = geometric_ladder(0.1, 0.5, 4);
  for (const auto& [name, body, q] : {std::tuple{"ball", Body::ball(3), v3(0, 0, -1)},
                                      std::tuple{"ellipsoid", ell, v3(0, 0, -2)},
                                      std::tuple{"paraboloid", Body::paraboloid(), v3(0, 0, 0)},
                                      std::tuple{"c1", c1(), v3(0, 0, 0)},
                                      std::tuple{"c1_a40", c1_a40(), v3(0, 0, 0)}}) {
    std::vector<double> errs;
    for (double t : ts) errs.push_back(check_grad_conormal(body, q, t, rules()));
    double growth = 0.0;
    for (std::size_t k = 0; k + 1 < errs.size(); ++k) growth = std::max(growth, errs[k + 1] - errs[k]);
    out.note(std::string(name) + "_err_t0.1", sci(errs.front()));
    out.note(std::string(name) + "_growth", sci(growth));
    out.require(errs.front() <= 1e-4, name);
    // Non-increasing along the ladder up to the finite-difference noise floor.
    out.require(growth <= 1e-8, std::string(name) + " monotone");
  }
}

/// Q as a form on the ambient space; independent of the tangent basis.
Mat ambient_form(const MinimizingPair& pair) { return pair.frame.basis * pair.Q * pair.frame.basis.transpose(); }

AffineMap random_map(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Mat L = Mat::Identity(3, 3);
    Vec t(3);
    for (int i = 0; i < 3; ++i) {
      t[i] = 0.5 * g(rng);
      for (int j = 0; j < 3; ++j) L(i, j) += 0.4 * g(rng);
    }
    Eigen::JacobiSVD<Mat> svd(L);
    if (L.determinant() > 0.05 && svd.singularValues()(0) / svd.singularValues()(2) <= 10.0) return AffineMap(L, t);
  }
}

void property_suites(Outcome& out) {
  // Centroid defect at converged pairs.
  double defect = 0.0;
  const std::vector<std::pair<Body, Vec>> pairs = {{Body::ball(3), v3(0.5, 0, 0)},
                                                   {Body::ball(3), v3(0.2, -0.3, 0.6)},
                                                   {Body::paraboloid(), v3(0.05, -0.02, 0.1)},
                                                   {c1(), v3(0.02, 0.03, 0.08)},
                                                   {c1_a40(), v3(-0.03, 0.01, 0.05)}};
  for (const auto& [body, p] : pairs) {
    const VolumeDistance vd = volume_distance(body, p, rules());
    defect = std::max(defect, (vd.pair.centroid - p).norm() / body.diameter());
  }
  out.note("centroid_defect", sci(defect));
  out.require(defect <= 1e-10, "centroid defect");

  // Moment identity.
  double moment = 0.0;
  for (int N : {2, 3}) {
    for (int K : {16, 64, 256}) {
      const SphereRule r = sphere_rule(N, K);
      Mat m = Mat::Zero(N, N);
      for (int j = 0; j < r.size(); ++j) m += r.weights[j] * r.nodes.col(j) * r.nodes.col(j).transpose();
      moment = std::max(moment, max_abs(m - sphere_measure(N) / N * Mat::Identity(N, N)));
    }
  }
  out.note("moment_err", sci(moment));
  out.require(moment <= 1e-10, "moment");

  // Affine covariance.
  std::mt19937_64 rng(2024);
  const Body graph = c1_a40();
  const Vec p = v3(0.02, -0.01, 0.07);
  const double v0 = volume_distance(graph, p, rules()).v;
  double cov = 0.0;
  for (int k = 0; k < 20; ++k) {
    const AffineMap T = random_map(rng);
    const double vt = volume_distance(apply_affine(graph, T), T.apply(p), rules()).v;
    cov = std::max(cov, std::abs(vt - std::abs(T.determinant()) * v0) / (std::abs(T.determinant()) * v0));
  }
  out.note("affine_cov", sci(cov));
  out.require(cov <= 1e-8, "affine covariance");

  // Quadrature refinement.
  const VolumeDistance coarse = volume_distance(graph, p, rules());
  const VolumeDistance fine = volume_distance(graph, p, coarse.pair.frame.n, make_rules(2, 512, 128));
  const double stab = std::max({std::abs(fine.v - coarse.v) / fine.v, std::abs(fine.pair.b - coarse.pair.b) / fine.pair.b,
                                (ambient_form(fine.pair) - ambient_form(coarse.pair)).norm() / fine.pair.Q.norm()});
  out.note("refinement", sci(stab));
  out.require(stab <= 1e-9, "refinement");

  // Monte Carlo cap volume of a tilted plane over the a40 surface.
  const PlaneFrame frame = PlaneFrame::from_normal(v3(0.02, 0.01, 0.08), v3(0.1, 0.05, 1).normalized());
  const double V = cap_volume(graph, frame, rules());
  const double lo[3] = {-0.6, -0.6, 0.0}, hi[3] = {0.6, 0.6, 0.2};
  const double box = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
  std::mt19937_64 mc(987654321);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long samples = 10'000'000;
  long inside = 0;
  const auto& g = std::get<QuarticGraph>(graph.variant());
  for (long s = 0; s < samples; ++s) {
    const double x = lo[0] + (hi[0] - lo[0]) * unit(mc);
    const double y = lo[1] + (hi[1] - lo[1]) * unit(mc);
    const double z = lo[2] + (hi[2] - lo[2]) * unit(mc);
    if (frame.n.dot(v3(x, y, z) - frame.p) > 0.0) continue;
    if (z >= g.height(x, y)) ++inside;
  }
  const double frac = static_cast<double>(inside) / samples;
  const double estimate = box * frac;
  const double se = box * std::sqrt(frac * (1.0 - frac) / samples);
  out.note("mc_V", sci(estimate));
  out.note("cap_V", sci(V));
  out.note("z_score", sci((estimate - V) / se));
  out.require(std::abs(estimate - V) <= 3.0 * se, "monte carlo");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "sphere exact suite", 1.0, sphere_exact},
      {2, "hessian identity", 30.0, hessian_identity},
      {3, "first-order convergence to the metric", 0.0, rate_first_order},
      {4, "slope of the c = 1 examples", 120.0, example_slope},
      {5, "rate and shape-form consistency", 0.0, rate_shape},
      {6, "diagonal ratio", 0.0, diagonal},
      {7, "conormal identity", 0.0, conormal_identity},
      {8, "property suites", 0.0, property_suites},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0) out.require(secs < c.time_limit, "time limit " + sci(c.time_limit) + " s");
    if (!out.pass) ++failures;
    std::printf("%s criterion %d (%s) [%.2f s]:%s\n", out.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                out.detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
