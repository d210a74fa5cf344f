#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fuzzyspec {

/// Validated batch-run description.  Unknown keys anywhere are fatal.
struct RunConfig {
  std::string command;
  std::string model;
  nlohmann::json parameters;
  std::string output_dir = ".";
  double hbar = 1.0;
  std::uint64_t seed = 1;
  std::string raw_text;  // hashed into every output
};

/// Strict parse + validation; throws config_error with a field path.
RunConfig parse_config(const std::string& text);

/// Runs the command and writes outputs under config.output_dir.
/// Returns 0; configuration problems throw config_error (exit 2 at the CLI),
/// anything else propagates as a numerical failure (exit 1).
int run_command(const RunConfig& config);

/// Gnuplot-dialect script referencing the CSVs; missing files are an error,
/// data-free files get an empty-range guard comment.
std::string emit_plot_script(const std::vector<std::string>& csv_paths);

}  // namespace fuzzyspec
