#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "voldist/geometry.hpp"

namespace voldist {

struct LadderConfig {
  double t0 = 0.0;  // 0: 0.2 * admissible reach
  double ratio = 0.5;
  int count = 8;
};

struct QuadratureConfig {
  int circle_nodes = 256;
  int depth_nodes = 64;
};

/// Parsed scenario. Every default is resolved at parse time so the echoed
/// configuration in a report is complete.
struct ScenarioConfig {
  nlohmann::json body_json;
  Body body;
  std::string task;  // volume_distance | asymptotics | validate
  std::vector<Vec> points;
  Vec base_point;
  LadderConfig ladder;
  QuadratureConfig quadrature;
  std::map<std::string, double> tolerances;
  std::string output = "voldist_out";
};

/// Tolerance keys understood by a task, with their default values.
std::map<std::string, double> default_tolerances(const std::string& task);

/// Throws Error(ConfigInvalid) on schema violations; body construction
/// failures (NotConvex, SingularMap) propagate with their own kind.
ScenarioConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

struct Check {
  std::string name;       // tolerance key
  double measured = 0.0;
  double threshold = 0.0;
  bool at_least = false;  // pass iff measured >= threshold (otherwise <=)
  bool vanishing = false; // quantity identically zero; order checks pass trivially
  bool pass = false;
  std::string note;
};

struct ScenarioResult {
  int exit_code = 0;  // 0 all checks pass, 1 computation failed, 2 a check failed
  nlohmann::json report;
  std::string csv;
  std::vector<Check> checks;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);
/// Property suite on the configured body (task "validate").
ScenarioResult validate(const ScenarioConfig& cfg);

void write_artifacts(const ScenarioResult& result, const std::string& prefix);

/// 17 significant digits, locale independent.
std::string format_number(double x);

}  // namespace voldist
