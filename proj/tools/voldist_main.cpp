#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "voldist/error.hpp"
#include "voldist/scenario.hpp"

namespace {

constexpr int kComputationFailed = 1;
constexpr int kConfigFailed = 2;

voldist::ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw voldist::Error(voldist::ErrorKind::ConfigInvalid, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw voldist::Error(voldist::ErrorKind::ConfigInvalid, std::string("malformed JSON: ") + e.what());
  }
  return voldist::parse_config(j);
}

bool is_config_error(voldist::ErrorKind kind) {
  using voldist::ErrorKind;
  return kind == ErrorKind::ConfigInvalid || kind == ErrorKind::NotConvex || kind == ErrorKind::SingularMap;
}

struct Overrides {
  std::optional<std::string> output;
  std::optional<int> circle_nodes;
  std::optional<int> depth_nodes;
};

int execute(const std::string& path, const Overrides& over, bool validate_only) {
  bool configured = false;
  try {
    voldist::ScenarioConfig cfg = load_config(path);
    if (over.output) cfg.output = *over.output;
    if (over.circle_nodes) {
      if (*over.circle_nodes < 8)
        throw voldist::Error(voldist::ErrorKind::ConfigInvalid, "--circle-nodes must be at least 8");
      cfg.quadrature.circle_nodes = *over.circle_nodes;
    }
    if (over.depth_nodes) {
      if (*over.depth_nodes < 4)
        throw voldist::Error(voldist::ErrorKind::ConfigInvalid, "--depth-nodes must be at least 4");
      cfg.quadrature.depth_nodes = *over.depth_nodes;
    }
    configured = true;
    const voldist::ScenarioResult result = validate_only ? voldist::validate(cfg) : voldist::run_scenario(cfg);
    voldist::write_artifacts(result, cfg.output);
    for (const voldist::Check& c : result.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << voldist::format_number(c.measured)
                << (c.at_least ? " >= " : " <= ") << voldist::format_number(c.threshold)
                << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
    std::cout << "wrote " << cfg.output << ".csv and " << cfg.output << ".report.json\n";
    return result.exit_code;
  } catch (const voldist::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!configured || is_config_error(e.kind())) return kConfigFailed;
    return kComputationFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kComputationFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume distance of convex bodies and its boundary asymptotics"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  Overrides over;
  std::string output;
  int circle_nodes = 0, depth_nodes = 0;

  CLI::App* run = app.add_subcommand("run", "Run the task named in a scenario config");
  run->add_option("config", run_path, "Scenario JSON file")->required();
  auto* out_opt = run->add_option("--output", output, "Output prefix for <prefix>.csv and <prefix>.report.json");
  auto* k_opt = run->add_option("--circle-nodes", circle_nodes, "Nodes of the section sphere rule");
  auto* m_opt = run->add_option("--depth-nodes", depth_nodes, "Gauss-Legendre nodes of the depth rule");

  CLI::App* val = app.add_subcommand("validate", "Run the property suite of a validate config");
  val->add_option("config", validate_path, "Scenario JSON file")->required();
  auto* val_out_opt = val->add_option("--output", output, "Output prefix for <prefix>.csv and <prefix>.report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailed;
  }

  if (out_opt->count() || val_out_opt->count()) over.output = output;
  if (k_opt->count()) over.circle_nodes = circle_nodes;
  if (m_opt->count()) over.depth_nodes = depth_nodes;

  if (run->parsed()) return execute(run_path, over, false);
  return execute(validate_path, over, true);
}
