#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oebif/graph.hpp"
#include "oebif/model_functions.hpp"

namespace oebif {

struct LoadedConfig {
  ModelConfig model;
  bool beta_given = false;  // beta is optional in the file; commands may supply it
  std::optional<std::filesystem::path> graph_path;  // resolved against the config directory
  std::vector<std::string> warnings;
};

// Parses the strict JSON configuration (unknown keys rejected) and validates
// parameter ranges; throws ConfigError on any schema or range violation.
[[nodiscard]] LoadedConfig load_config(const std::filesystem::path& path);

// Parses {"n": ..., "edges": [[i,j], ...]} and builds the graph.
[[nodiscard]] Graph load_graph(const std::filesystem::path& path);

}  // namespace oebif
