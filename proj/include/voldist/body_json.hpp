#pragma once

#include <json.hpp>

#include "voldist/affine.hpp"
#include "voldist/geometry.hpp"

namespace voldist {

/// {"type":"ellipsoid","center":[...],"linear":[[...]]}
/// {"type":"quartic_graph","c":0.0,"a":[a40,a31,a22,a13,a04],"domain_radius":0.8}
/// {"type":"affine_image","base":{...},"map":{"linear":[[...]],"translation":[...]}}
/// Malformed input raises ConfigInvalid; geometric failures keep their kind.
Body body_from_json(const nlohmann::json& j);
nlohmann::json body_to_json(const Body& body);

AffineMap affine_map_from_json(const nlohmann::json& j);
nlohmann::json affine_map_to_json(const AffineMap& map);

Vec vec_from_json(const nlohmann::json& j);
Mat mat_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const Mat& m);

/// Fields T, c, quartic, h, xi, nu, hS, A.
nlohmann::json normal_form_to_json(const NormalForm& nf);

}  // namespace voldist
