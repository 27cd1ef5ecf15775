#pragma once

#include <string>

#include "bench.hpp"
#include "csketch/basis.hpp"
#include "csketch/selection.hpp"
#include "json.hpp"

namespace csketch::cli {

/// Everything a subcommand can be configured with. Defaults, then the JSON
/// config file, then command-line flags.
struct Settings {
  SketchConfig sketch;
  FitOptions fit;
  std::string target_column = "y";
  bool normalize = false;
  bool log_transform = false;

  SelectionOptions selection;
  SearchGrid grid;
  bool holdout = false;

  BenchConfig bench;
};

/// Parses a config file; an empty path gives an empty object.
nlohmann::json load_config(const std::string& path);

/// Applies the sections "sketch", "fit", "data", "selection" and "bench".
/// Unknown keys are rejected so typos do not pass silently.
void apply_config(const nlohmann::json& config, Settings& settings);

SolveRoute parse_route(const std::string& text);

}  // namespace csketch::cli
