#include "voldist/body_json.hpp"

#include "voldist/error.hpp"

namespace voldist {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) invalid(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Vec vec_from_json(const json& j) {
  if (!j.is_array() || j.empty()) invalid("expected a non-empty numeric array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], "vector entry");
  return v;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) invalid("expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  if (cols == 0) invalid("matrix rows must be non-empty arrays");
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vec row = vec_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != cols) invalid("matrix rows have different lengths");
    m.row(r) = row.transpose();
  }
  return m;
}

json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Vec(m.row(r).transpose())));
  return rows;
}

AffineMap affine_map_from_json(const json& j) {
  const Mat linear = mat_from_json(field(j, "linear"));
  const Vec translation = j.contains("translation") ? vec_from_json(j.at("translation")) : Vec::Zero(linear.rows());
  if (linear.rows() != linear.cols() || translation.size() != linear.rows()) {
    invalid("affine map dimensions do not match");
  }
  return AffineMap(linear, translation);
}

json affine_map_to_json(const AffineMap& map) {
  return {{"linear", to_json(map.linear())}, {"translation", to_json(map.translation())}};
}

Body body_from_json(const json& j) {
  const json& type = field(j, "type");
  if (!type.is_string()) invalid("body type must be a string");
  const std::string kind = type.get<std::string>();
  if (kind == "ellipsoid") {
    const Vec center = vec_from_json(field(j, "center"));
    const Mat linear = mat_from_json(field(j, "linear"));
    if (linear.rows() != center.size() || linear.cols() != center.size()) invalid("ellipsoid dimensions do not match");
    if (center.size() < 3 || center.size() > 4) invalid("ellipsoids must live in R^3 or R^4");
    return Body::ellipsoid(center, linear);
  }
  if (kind == "quartic_graph") {
    const double c = number(field(j, "c"), "c");
    std::array<double, 5> a{};
    if (j.contains("a")) {
      const Vec av = vec_from_json(j.at("a"));
      if (av.size() != 5) invalid("quartic coefficients must be [a40, a31, a22, a13, a04]");
      for (int i = 0; i < 5; ++i) a[static_cast<std::size_t>(i)] = av[i];
    }
    const double radius = j.contains("domain_radius") ? number(j.at("domain_radius"), "domain_radius") : 0.8;
    return Body::quartic_graph(c, a, radius);
  }
  if (kind == "affine_image") {
    const Body base = body_from_json(field(j, "base"));
    const AffineMap map = affine_map_from_json(field(j, "map"));
    if (map.dim() != base.dim()) invalid("affine map dimension does not match the base body");
    return apply_affine(base, map);
  }
  invalid("unknown body type '" + kind + "'");
}

json body_to_json(const Body& body) {
  return std::visit(
      [](const auto& b) -> json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return {{"type", "ellipsoid"}, {"center", to_json(b.center)}, {"linear", to_json(b.linear)}};
        } else if constexpr (std::is_same_v<T, QuarticGraph>) {
          return {{"type", "quartic_graph"}, {"c", b.c}, {"a", b.a}, {"domain_radius", b.domain_radius}};
        } else {
          return {{"type", "affine_image"}, {"base", body_to_json(*b.base)}, {"map", affine_map_to_json(b.map)}};
        }
      },
      body.variant());
}

json normal_form_to_json(const NormalForm& nf) {
  return {{"q", to_json(nf.q)},
          {"T", affine_map_to_json(nf.T)},
          {"c", nf.c},
          {"quartic", nf.quartic},
          {"h", to_json(nf.h)},
          {"xi", to_json(nf.xi)},
          {"nu", to_json(nf.nu)},
          {"hS", to_json(nf.hS)},
          {"hS_normalized", to_json(nf.hS_normalized)},
          {"A", to_json(nf.A)}};
}

}  // namespace voldist
