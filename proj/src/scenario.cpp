#include "voldist/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "voldist/asympt.hpp"
#include "voldist/body_json.hpp"
#include "voldist/error.hpp"

namespace voldist {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

const std::set<std::string> kTasks = {"volume_distance", "asymptotics", "validate"};

double positive_number(const json& j, const std::string& key) {
  if (!j.is_number()) invalid(key + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x) || x <= 0.0) invalid(key + " must be positive and finite");
  return x;
}

int integer_at_least(const json& j, const std::string& key, int lo) {
  if (!j.is_number_integer()) invalid(key + " must be an integer");
  const long long x = j.get<long long>();
  if (x < lo || x > 1 << 20) invalid(key + " must be at least " + std::to_string(lo));
  return static_cast<int>(x);
}

Vec point_from_json(const json& j, int dim, const std::string& what) {
  const Vec p = vec_from_json(j);
  if (p.size() != dim) invalid(what + " must have " + std::to_string(dim) + " coordinates");
  if (!p.allFinite()) invalid(what + " must be finite");
  return p;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) invalid("unknown key '" + item.key() + "' in " + where);
}

std::string upper_name(int i, int j) { return "Q" + std::to_string(i + 1) + std::to_string(j + 1); }

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& columns) {
    out_ << '#';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
  }
  void row(const std::string& label, const std::vector<double>& values) {
    out_ << label;
    for (double x : values) out_ << ',' << format_number(x);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json check_to_json(const Check& c) {
  return {{"name", c.name},
          {"measured", number_or_null(c.measured)},
          {"tolerance", c.threshold},
          {"comparison", c.at_least ? ">=" : "<="},
          {"vanishing", c.vanishing},
          {"verdict", c.pass ? "pass" : "fail"},
          {"note", c.note}};
}

class CheckList {
 public:
  explicit CheckList(const std::map<std::string, double>& tolerances) : tol_(tolerances) {}

  double tol(const std::string& key) const { return tol_.at(key); }

  void at_most(const std::string& key, double measured, std::string note = {}) {
    Check c{.name = key, .measured = measured, .threshold = tol(key), .note = std::move(note)};
    c.pass = std::isfinite(measured) && measured <= c.threshold;
    checks_.push_back(c);
  }

  void order(const std::string& key, const OrderFit& fit, std::string note = {}) {
    Check c{.name = key, .measured = fit.exponent, .threshold = tol(key), .at_least = true,
            .vanishing = fit.vanishing, .note = std::move(note)};
    c.pass = fit.vanishing || (std::isfinite(fit.exponent) && fit.exponent >= c.threshold);
    if (fit.vanishing) c.note = "identically zero below the noise floor";
    checks_.push_back(c);
  }

  void push(Check c) { checks_.push_back(std::move(c)); }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  const std::map<std::string, double>& tol_;
  std::vector<Check> checks_;
};

Rules rules_for(const ScenarioConfig& cfg) {
  return make_rules(cfg.body.dim() - 1, cfg.quadrature.circle_nodes, cfg.quadrature.depth_nodes);
}

SolverOptions solver_for(const ScenarioConfig& cfg) {
  SolverOptions opts;
  opts.tol = cfg.tolerances.at("solver");
  return opts;
}

Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec u(dim);
  for (int i = 0; i < dim; ++i) u[i] = gauss(rng);
  return u.normalized();
}

json pair_to_json(const MinimizingPair& pair) {
  return {{"n", to_json(pair.frame.n)},       {"V", pair.V},
          {"b", pair.b},                      {"centroid", to_json(pair.centroid)},
          {"hessV", to_json(pair.hessV)},     {"Q", to_json(pair.Q)},
          {"iterations", pair.iterations},    {"residual", pair.residual}};
}

/// Q as a form on the ambient space; independent of the tangent basis.
Mat ambient_form(const MinimizingPair& pair) { return pair.frame.basis * pair.Q * pair.frame.basis.transpose(); }

/// Relative error of the directional derivative of v against Dv . u.
double fd_gradient_error(const Body& body, const Vec& p, const VolumeDistance& vd, const Vec& u, const Rules& rules,
                         const SolverOptions& opts) {
  const double eps = 1e-6 * body.diameter();
  const Vec& n0 = vd.pair.frame.n;
  const double vp = volume_distance(body, p + eps * u, n0, rules, opts).v;
  const double vm = volume_distance(body, p - eps * u, n0, rules, opts).v;
  const Vec Dv = vd.pair.b * n0;
  return std::abs((vp - vm) / (2.0 * eps) - Dv.dot(u)) / Dv.norm();
}

ScenarioResult finish(const ScenarioConfig& cfg, json results, std::string csv, std::vector<Check> checks) {
  ScenarioResult out;
  out.checks = std::move(checks);
  out.csv = std::move(csv);
  bool all = true;
  json list = json::array();
  for (const Check& c : out.checks) {
    all = all && c.pass;
    list.push_back(check_to_json(c));
  }
  out.exit_code = all ? 0 : 2;
  out.report = {{"config", config_to_json(cfg)},
                {"status", all ? "pass" : "fail"},
                {"exit_code", out.exit_code},
                {"results", std::move(results)},
                {"checks", std::move(list)}};
  return out;
}

ScenarioResult run_volume_distance(const ScenarioConfig& cfg) {
  const Body& body = cfg.body;
  const int D = body.dim();
  const Rules rules = rules_for(cfg);
  const SolverOptions opts = solver_for(cfg);
  CheckList checks(cfg.tolerances);

  std::vector<std::string> cols = {"point"};
  for (int i = 0; i < D; ++i) cols.push_back("p" + std::to_string(i));
  cols.push_back("v");
  cols.push_back("b");
  for (int i = 0; i < D; ++i) cols.push_back("n" + std::to_string(i));
  for (int i = 0; i < D - 1; ++i)
    for (int j = i; j < D - 1; ++j) cols.push_back(upper_name(i, j));
  cols.insert(cols.end(), {"centroid_defect", "fd_grad_rel_err", "hess_rel_err"});
  Csv csv(cols);

  json points = json::array();
  double worst_defect = 0.0, worst_grad = 0.0, worst_hess = 0.0;
  std::mt19937_64 rng(20240607);
  for (std::size_t k = 0; k < cfg.points.size(); ++k) {
    const Vec& p = cfg.points[k];
    const VolumeDistance vd = volume_distance(body, p, rules, opts);
    const double defect = (vd.pair.centroid - p).norm() / body.diameter();
    const Vec u = random_unit(rng, D);
    const double grad_err = fd_gradient_error(body, p, vd, u, rules, opts);
    const HessianIdentity hid = hessian_identity_check(body, p, rules, opts);
    worst_defect = std::max(worst_defect, defect);
    worst_grad = std::max(worst_grad, grad_err);
    worst_hess = std::max(worst_hess, hid.rel_err);

    json entry = pair_to_json(vd.pair);
    entry["p"] = to_json(p);
    entry["v"] = vd.v;
    entry["Dv"] = to_json(Vec(vd.pair.b * vd.pair.frame.n));
    entry["centroid_defect"] = defect;
    entry["fd_grad"] = {{"direction", to_json(u)}, {"rel_err", grad_err}};
    entry["hessian_identity"] = {{"lhs", to_json(hid.lhs)}, {"rhs", to_json(hid.rhs)}, {"rel_err", hid.rel_err}};
    points.push_back(std::move(entry));

    std::vector<double> row = {static_cast<double>(k)};
    for (int i = 0; i < D; ++i) row.push_back(p[i]);
    row.push_back(vd.v);
    row.push_back(vd.pair.b);
    for (int i = 0; i < D; ++i) row.push_back(vd.pair.frame.n[i]);
    for (int i = 0; i < D - 1; ++i)
      for (int j = i; j < D - 1; ++j) row.push_back(vd.pair.Q(i, j));
    row.insert(row.end(), {defect, grad_err, hid.rel_err});
    csv.row(row);
  }
  checks.at_most("solver", worst_defect, "max |centroid - p| / diameter");
  checks.at_most("fd_grad", worst_grad, "max relative error of central difference of v against Dv");
  checks.at_most("fd_hess", worst_hess, "max relative error of -(1/b) D2v|H against Q^-1");
  return finish(cfg, {{"points", std::move(points)}}, csv.str(), checks.take());
}

ScenarioResult run_asymptotics(const ScenarioConfig& cfg) {
  const Body& body = cfg.body;
  if (body.dim() != 3) throw Error(ErrorKind::UnsupportedDimension, "asymptotics requires a surface in R^3");
  const Rules rules = rules_for(cfg);
  const SolverOptions opts = solver_for(cfg);
  CheckList checks(cfg.tolerances);

  const LadderSpec spec{.t0 = cfg.ladder.t0, .ratio = cfg.ladder.ratio, .count = cfg.ladder.count};
  const RateReport rate = check_rate_theorem(body, cfg.base_point, rules, spec);
  const NormalForm& nf = rate.nf;
  const Body nb = normalized_body(body, nf);
  const ExpansionFit& fit = rate.fit;

  Csv csv({"t", "Q11", "Q12", "Q22", "b", "V", "Zx", "Zy", "diag_ratio", "conormal_err"});
  std::vector<double> ratios, conormal_errs;
  double worst_defect = 0.0;
  json rows = json::array();
  for (std::size_t k = 0; k < fit.ts.size(); ++k) {
    const double t = fit.ts[k];
    const PlaneFrame cap_frame = PlaneFrame::from_normal(Vec::Unit(3, 2) * t, Vec::Unit(3, 2));
    const double V = cap_volume(nb, cap_frame, rules);
    const CurveDerivatives d = curve_derivatives(body, nf, t, rules, opts);
    ratios.push_back(d.diag_ratio);
    conormal_errs.push_back(d.conormal_err);
    worst_defect = std::max(worst_defect, d.pair.residual / body.diameter());
    const Mat& Q = fit.Qs[k];
    const Vec& Z = fit.centroids[k];
    csv.row({t, Q(0, 0), Q(0, 1), Q(1, 1), fit.bs[k], V, Z[0], Z[1], d.diag_ratio, d.conormal_err});
    rows.push_back({{"t", t},
                    {"Q", to_json(Q)},
                    {"b", fit.bs[k]},
                    {"V", V},
                    {"Z", to_json(Z)},
                    {"gamma", to_json(d.sample.gamma)},
                    {"v", d.v},
                    {"v_t", d.v_t},
                    {"Dv", to_json(d.Dv)},
                    {"diag_ratio", d.diag_ratio},
                    {"conormal_err", d.conormal_err},
                    {"pair_residual", d.pair.residual}});
  }
  const OrderFit decay = fit_order(fit.ts, ratios, cfg.tolerances.at("diagonal_floor"));
  const double max_ratio = *std::max_element(ratios.begin(), ratios.end());
  const double max_conormal = *std::max_element(conormal_errs.begin(), conormal_errs.end());
  // The ladder runs toward smaller t; the error must not grow along it.
  double worst_increase = 0.0;
  for (std::size_t k = 0; k + 1 < conormal_errs.size(); ++k)
    worst_increase = std::max(worst_increase, conormal_errs[k + 1] - conormal_errs[k]);

  checks.at_most("solver", worst_defect, "max |centroid - p| / diameter along the centroid curve");
  checks.at_most("q0", rate.q0_err, "max entry of |Q0 - I|");
  checks.order("order_first", rate.order_first, "exponent of |Q(t) - I|");
  checks.order("order_second", rate.order_second, "exponent of |Q(t) - I - tA|");
  const bool hs_vanishes = nf.hS_normalized.norm() < 1e-12;
  checks.at_most("q1_rel", hs_vanishes ? rate.q1_err_abs : rate.q1_err_minus_hS,
                 hs_vanishes ? "|Q1 + hS| (hS = 0)" : "|Q1 + hS| / |hS|");
  checks.order("order_z", fit.order_Z, "exponent of the section centroid offset");
  {
    Check c{.name = "diagonal_floor", .measured = max_ratio, .threshold = cfg.tolerances.at("diagonal_floor"),
            .vanishing = decay.vanishing, .note = {}};
    c.pass = decay.vanishing || decay.exponent >= cfg.tolerances.at("diagonal_order");
    c.note = decay.vanishing ? "ratio below floor on the whole ladder" : "ratio above floor; decay order decides";
    checks.push(c);
  }
  checks.order("diagonal_order", decay, "exponent of the diagonal ratio");
  checks.at_most("conormal", max_conormal, "max |Dv - v_t nu| / |Dv| along the ladder");
  checks.at_most("conormal_noise", worst_increase, "max growth of the conormal error toward smaller t");

  json results = {
      {"normal_form", normal_form_to_json(nf)},
      {"ladder", {{"t0", fit.ts.front()}, {"ratio", cfg.ladder.ratio}, {"count", cfg.ladder.count}}},
      {"Q0", to_json(fit.Q0)},
      {"Q1", to_json(fit.Q1)},
      {"fit_points", fit.fit_points},
      {"q0_err", rate.q0_err},
      {"order_first", number_or_null(rate.order_first.exponent)},
      {"order_second", number_or_null(rate.order_second.exponent)},
      {"order_residual", number_or_null(fit.order_resid.exponent)},
      {"order_z", number_or_null(fit.order_Z.exponent)},
      {"q1_err_against_minus_hS", rate.q1_err_minus_hS},
      {"q1_err_against_plus_hS", rate.q1_err_plus_hS},
      {"q1_err_abs", rate.q1_err_abs},
      {"diagonal_decay", number_or_null(decay.exponent)},
      {"rows", std::move(rows)}};
  return finish(cfg, std::move(results), csv.str(), checks.take());
}

double moment_error(int N, int K) {
  const SphereRule rule = sphere_rule(N, K);
  const double lambda = sphere_measure(N);
  double mass = 0.0;
  Mat second = Mat::Zero(N, N);
  for (int i = 0; i < rule.size(); ++i) {
    mass += rule.weights[i];
    second += rule.weights[i] * rule.nodes.col(i) * rule.nodes.col(i).transpose();
  }
  const Mat target = (lambda / N) * Mat::Identity(N, N);
  return std::max(std::abs(mass - lambda) / lambda, (second - target).cwiseAbs().maxCoeff() / (lambda / N));
}

AffineMap random_map(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Mat L = Mat::Identity(dim, dim);
    Vec t(dim);
    for (int i = 0; i < dim; ++i) {
      t[i] = 0.5 * gauss(rng);
      for (int j = 0; j < dim; ++j) L(i, j) += 0.3 * gauss(rng);
    }
    const Eigen::JacobiSVD<Mat> svd(L);
    const double cond = svd.singularValues()(0) / svd.singularValues()(dim - 1);
    if (L.determinant() > 0.1 && cond < 6.0) return AffineMap(L, t);
  }
}

ScenarioResult run_validate(const ScenarioConfig& cfg) {
  const Body& body = cfg.body;
  const int D = body.dim();
  const int N = D - 1;
  const Rules rules = rules_for(cfg);
  const SolverOptions opts = solver_for(cfg);
  CheckList checks(cfg.tolerances);
  json results;

  // Moment identity of the sphere rule.
  const double moment = moment_error(N, cfg.quadrature.circle_nodes);
  results["moment_rel_err"] = moment;

  // Solver defect and hessian identity at every point.
  double worst_defect = 0.0, worst_hess = 0.0;
  json points = json::array();
  std::vector<VolumeDistance> solved;
  for (const Vec& p : cfg.points) {
    solved.push_back(volume_distance(body, p, rules, opts));
    const double defect = (solved.back().pair.centroid - p).norm() / body.diameter();
    const HessianIdentity hid = hessian_identity_check(body, p, rules, opts);
    worst_defect = std::max(worst_defect, defect);
    worst_hess = std::max(worst_hess, hid.rel_err);
    json entry = pair_to_json(solved.back().pair);
    entry["p"] = to_json(p);
    entry["v"] = solved.back().v;
    entry["centroid_defect"] = defect;
    entry["hess_rel_err"] = hid.rel_err;
    points.push_back(std::move(entry));
  }
  results["points"] = std::move(points);

  // Quadrature refinement: double both rules at the first point.
  const Vec& p0 = cfg.points.front();
  const VolumeDistance& base = solved.front();
  const Rules fine = make_rules(N, 2 * cfg.quadrature.circle_nodes, 2 * cfg.quadrature.depth_nodes);
  const VolumeDistance refined = volume_distance(body, p0, base.pair.frame.n, fine, opts);
  const double dv = std::abs(refined.v - base.v) / std::abs(base.v);
  const double db = std::abs(refined.pair.b - base.pair.b) / base.pair.b;
  const double dQ = (ambient_form(refined.pair) - ambient_form(base.pair)).norm() / base.pair.Q.norm();
  const double stability = std::max({dv, db, dQ});
  results["refinement"] = {{"v_rel", dv}, {"b_rel", db}, {"Q_rel", dQ}};

  // Affine covariance of v.
  std::mt19937_64 rng(97531);
  double worst_cov = 0.0;
  for (int k = 0; k < 20; ++k) {
    const AffineMap map = random_map(rng, D);
    const Body image = apply_affine(body, map);
    const double v_image = volume_distance(image, map.apply(p0), rules, opts).v;
    const double expected = std::abs(map.determinant()) * base.v;
    worst_cov = std::max(worst_cov, std::abs(v_image - expected) / expected);
  }
  results["affine_covariance_rel_err"] = worst_cov;

  // Normalization: horizontal sections of the normalized body are centered
  // on the z-axis to second order.
  const NormalForm nf = N == 2 ? normalize_at(body, cfg.base_point) : unimodular_frame(body, cfg.base_point);
  const Body nb = normalized_body(body, nf);
  const double reach = admissible_reach(nb, rules);
  const double z0 = std::min(0.2, 0.5 * reach);
  const std::vector<double> zs = geometric_ladder(z0, 0.5, 7);
  const ExpansionFit ladder = q_ladder(body, nf, zs, rules);
  std::vector<double> offsets;
  for (const Vec& z : ladder.centroids) offsets.push_back(z.norm());
  const OrderFit norm_order = fit_order(zs, offsets, 1e-13);
  json norm = {{"base_point", to_json(cfg.base_point)}, {"reach", reach},
               {"z", zs},                               {"centroid_offsets", offsets},
               {"order", number_or_null(norm_order.exponent)}};
  if (N == 2) norm["normal_form"] = normal_form_to_json(nf);
  results["normalization"] = std::move(norm);

  checks.at_most("solver", worst_defect, "max |centroid - p| / diameter");
  checks.at_most("fd_hess", worst_hess, "max relative error of -(1/b) D2v|H against Q^-1");
  checks.at_most("moment", moment, "sphere rule mass and second moment");
  checks.at_most("quadrature_stability", stability, "relative change of v, b, Q when K and m double");
  checks.at_most("affine_covariance", worst_cov, "max |v(AK, Ap) - |det A| v(K, p)| / |det A| v(K, p)");
  checks.order("normalization_order", norm_order, "exponent of the horizontal-section centroid offset");

  std::vector<Check> list = checks.take();
  Csv csv({"check", "measured", "tolerance", "pass"});
  for (const Check& c : list) csv.row(c.name, {c.measured, c.threshold, c.pass ? 1.0 : 0.0});
  return finish(cfg, std::move(results), csv.str(), std::move(list));
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::map<std::string, double> default_tolerances(const std::string& task) {
  if (task == "volume_distance") return {{"solver", 1e-12}, {"fd_grad", 1e-6}, {"fd_hess", 1e-4}};
  if (task == "asymptotics")
    return {{"solver", 1e-12},       {"q0", 1e-5},           {"q1_rel", 0.02},
            {"order_first", 0.9},    {"order_second", 1.8},  {"order_z", 1.9},
            {"diagonal_floor", 1e-7}, {"diagonal_order", 0.9}, {"conormal", 1e-4},
            {"conormal_noise", 1e-8}};
  if (task == "validate")
    return {{"solver", 1e-12},
            {"fd_hess", 1e-4},
            {"moment", 1e-10},
            {"quadrature_stability", 1e-9},
            {"affine_covariance", 1e-8},
            {"normalization_order", 1.9}};
  invalid("unknown task '" + task + "'");
}

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  check_keys(j, {"body", "task", "points", "base_point", "ladder", "quadrature", "tolerances", "output"}, "config");
  if (!j.contains("body")) invalid("missing 'body'");
  if (!j.contains("task") || !j.at("task").is_string()) invalid("missing or non-string 'task'");

  ScenarioConfig cfg{.body_json = j.at("body"), .body = body_from_json(j.at("body")), .task = {}, .points = {},
                     .base_point = {}, .ladder = {}, .quadrature = {}, .tolerances = {}, .output = "voldist_out"};
  cfg.task = j.at("task").get<std::string>();
  if (!kTasks.count(cfg.task)) invalid("unknown task '" + cfg.task + "'");
  const int D = cfg.body.dim();

  if (j.contains("points")) {
    if (!j.at("points").is_array()) invalid("'points' must be an array");
    for (std::size_t k = 0; k < j.at("points").size(); ++k)
      cfg.points.push_back(point_from_json(j.at("points")[k], D, "points[" + std::to_string(k) + "]"));
  }
  if ((cfg.task == "volume_distance" || cfg.task == "validate") && cfg.points.empty())
    invalid("task '" + cfg.task + "' requires a non-empty 'points' array");

  if (j.contains("base_point")) {
    cfg.base_point = point_from_json(j.at("base_point"), D, "base_point");
  } else {
    cfg.base_point = cfg.body.support_point(-Vec::Unit(D, D - 1));
  }

  if (j.contains("ladder")) {
    const json& l = j.at("ladder");
    if (!l.is_object()) invalid("'ladder' must be an object");
    check_keys(l, {"t0", "ratio", "count"}, "ladder");
    if (l.contains("t0")) {
      if (!l.at("t0").is_number() || l.at("t0").get<double>() < 0.0) invalid("ladder.t0 must be >= 0");
      cfg.ladder.t0 = l.at("t0").get<double>();
    }
    if (l.contains("ratio")) {
      cfg.ladder.ratio = positive_number(l.at("ratio"), "ladder.ratio");
      if (cfg.ladder.ratio >= 1.0) invalid("ladder.ratio must lie in (0, 1)");
    }
    if (l.contains("count")) cfg.ladder.count = integer_at_least(l.at("count"), "ladder.count", 4);
  }

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    if (!q.is_object()) invalid("'quadrature' must be an object");
    check_keys(q, {"circle_nodes", "depth_nodes"}, "quadrature");
    if (q.contains("circle_nodes"))
      cfg.quadrature.circle_nodes = integer_at_least(q.at("circle_nodes"), "quadrature.circle_nodes", 8);
    if (q.contains("depth_nodes"))
      cfg.quadrature.depth_nodes = integer_at_least(q.at("depth_nodes"), "quadrature.depth_nodes", 4);
  }

  cfg.tolerances = default_tolerances(cfg.task);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) invalid("'tolerances' must be an object");
    for (const auto& item : t.items()) {
      if (!cfg.tolerances.count(item.key()))
        invalid("tolerance '" + item.key() + "' is not used by task '" + cfg.task + "'");
      cfg.tolerances[item.key()] = positive_number(item.value(), "tolerances." + item.key());
    }
  }

  if (j.contains("output")) {
    if (!j.at("output").is_string() || j.at("output").get<std::string>().empty())
      invalid("'output' must be a non-empty string");
    cfg.output = j.at("output").get<std::string>();
  }
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  json points = json::array();
  for (const Vec& p : cfg.points) points.push_back(to_json(p));
  json tolerances = json::object();
  for (const auto& [key, value] : cfg.tolerances) tolerances[key] = value;
  return {{"body", cfg.body_json},
          {"task", cfg.task},
          {"points", std::move(points)},
          {"base_point", to_json(cfg.base_point)},
          {"ladder", {{"t0", cfg.ladder.t0}, {"ratio", cfg.ladder.ratio}, {"count", cfg.ladder.count}}},
          {"quadrature",
           {{"circle_nodes", cfg.quadrature.circle_nodes}, {"depth_nodes", cfg.quadrature.depth_nodes}}},
          {"tolerances", std::move(tolerances)},
          {"output", cfg.output}};
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  if (cfg.task == "volume_distance") return run_volume_distance(cfg);
  if (cfg.task == "asymptotics") return run_asymptotics(cfg);
  return run_validate(cfg);
}

ScenarioResult validate(const ScenarioConfig& cfg) {
  if (cfg.task != "validate") invalid("validate requires task 'validate', got '" + cfg.task + "'");
  return run_validate(cfg);
}

void write_artifacts(const ScenarioResult& result, const std::string& prefix) {
  std::ofstream csv(prefix + ".csv", std::ios::binary);
  std::ofstream report(prefix + ".report.json", std::ios::binary);
  if (!csv || !report) throw Error(ErrorKind::ConfigInvalid, "cannot write outputs with prefix '" + prefix + "'");
  csv << result.csv;
  report << result.report.dump(2) << '\n';
}

}  // namespace voldist
