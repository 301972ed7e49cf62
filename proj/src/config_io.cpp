#include "oebif/config_io.hpp"

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "oebif/errors.hpp"

namespace oebif {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + " has unknown key \"" + key + "\"");
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + " is missing \"" + key + "\"");
  if (!obj[key].is_number()) throw ConfigError(where + " key \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

SmoothFunction parse_function(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  if (!obj.contains("kind") || !obj["kind"].is_string())
    throw ConfigError(where + " needs a string \"kind\"");
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "TanhGain") {
    reject_unknown_keys(obj, {"kind", "gain"}, where);
    return SmoothFunction::tanh_gain(require_number(obj, "gain", where));
  }
  if (kind == "Affine") {
    reject_unknown_keys(obj, {"kind", "slope", "offset"}, where);
    const double slope = require_number(obj, "slope", where);
    const double offset = obj.contains("offset") ? require_number(obj, "offset", where) : 0.0;
    return SmoothFunction::affine(slope, offset);
  }
  throw ConfigError(where + " has unknown kind \"" + kind + "\" (expected TanhGain or Affine)");
}

}  // namespace

LoadedConfig load_config(const std::filesystem::path& path) {
  const json root = parse_file(path);
  if (!root.is_object()) throw ConfigError(path.string() + ": top level must be an object");
  reject_unknown_keys(root, {"s", "r", "u", "gamma", "ebar", "tau_x", "tau_e", "beta", "graph"},
                      "configuration");

  LoadedConfig loaded;
  for (const char* key : {"s", "r", "u"})
    if (!root.contains(key))
      throw ConfigError(std::string("configuration is missing \"") + key + "\"");
  loaded.model.s = parse_function(root["s"], "function \"s\"");
  loaded.model.r = parse_function(root["r"], "function \"r\"");
  loaded.model.u = parse_function(root["u"], "function \"u\"");
  loaded.model.gamma = require_number(root, "gamma", "configuration");
  loaded.model.ebar = require_number(root, "ebar", "configuration");
  loaded.model.tau_x = require_number(root, "tau_x", "configuration");
  loaded.model.tau_e = require_number(root, "tau_e", "configuration");
  if (root.contains("beta")) {
    loaded.model.beta = require_number(root, "beta", "configuration");
    loaded.beta_given = true;
  }
  if (root.contains("graph")) {
    if (!root["graph"].is_string())
      throw ConfigError("configuration key \"graph\" must be a path string");
    std::filesystem::path graph_path = root["graph"].get<std::string>();
    if (graph_path.is_relative()) graph_path = path.parent_path() / graph_path;
    loaded.graph_path = graph_path;
  }

  const ValidationReport report = validate_config(loaded.model);
  if (!report.hard_errors.empty()) {
    std::string message = path.string() + ": invalid parameters";
    for (const std::string& err : report.hard_errors) message += "\n  " + err;
    throw ConfigError(message);
  }
  loaded.warnings = report.warnings;
  return loaded;
}

Graph load_graph(const std::filesystem::path& path) {
  const json root = parse_file(path);
  if (!root.is_object()) throw ConfigError(path.string() + ": top level must be an object");
  reject_unknown_keys(root, {"n", "edges"}, "graph");
  if (!root.contains("n") || !root["n"].is_number_integer())
    throw ConfigError("graph needs an integer \"n\"");
  if (!root.contains("edges") || !root["edges"].is_array())
    throw ConfigError("graph needs an \"edges\" array");
  const int n = root["n"].get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const json& edge : root["edges"]) {
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_integer() ||
        !edge[1].is_number_integer())
      throw ConfigError("each edge must be a pair of integer vertex ids");
    edges.emplace_back(edge[0].get<int>(), edge[1].get<int>());
  }
  return build_graph(n, edges);
}

}  // namespace oebif
