#pragma once

#include <filesystem>
#include <string>

#include "rkf/experiment.hpp"
#include "rkf/uncertain_system.hpp"

namespace rkf {

/// A benchmark description: the uncertain model plus experiment settings.
struct ParsedConfig {
  std::string name;
  UncertainLinearSystem system;
  ExperimentConfig experiment;

  const InitialBelief& initial_belief() const { return experiment.active_case().initial; }
};

/// Parse and fully validate config text. Errors carry the section/key and,
/// where available, the line number.
ParsedConfig parse_system(const std::string& text);
ParsedConfig load_config_file(const std::filesystem::path& path);

/// Config text that parses back to an equivalent ParsedConfig.
std::string serialize_config(const ParsedConfig& config);

}  // namespace rkf
