#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzyspec/errors.hpp"
#include "fuzzyspec/io.hpp"
#include "fuzzyspec/run.hpp"

namespace {

int fail_config(const std::string& what) {
  std::cerr << "config error: " << what << "\n";
  return 2;
}

int fail_numeric(const fuzzyspec::RunConfig* cfg, const std::string& what) {
  std::cerr << "numerical failure: " << what << "\n";
  if (cfg) {
    try {
      std::filesystem::create_directories(cfg->output_dir);
      nlohmann::ordered_json j;
      j["schema"] = fuzzyspec::kSchemaVersion;
      j["config_hash"] = fuzzyspec::fnv1a_hex(cfg->raw_text);
      j["seed"] = cfg->seed;
      j["error"] = what;
      fuzzyspec::write_text(
          (std::filesystem::path(cfg->output_dir) / "error.json").string(),
          j.dump(2) + "\n");
    } catch (...) {
      // diagnostics are best-effort
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric-operator analysis runner"};
  app.require_subcommand(0);

  std::string command, config_path, out_dir;
  long long seed_flag = -1;
  app.add_option("command", command, "analyze | spectrum | flow | uncertainty-curve | gup | generate-algebra | fuzzyb-demo")
      ->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed_flag, "seed (overrides env and config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::ifstream f(config_path, std::ios::binary);
  if (!f) return fail_config("cannot read config file: " + config_path);
  std::ostringstream buf;
  buf << f.rdbuf();

  fuzzyspec::RunConfig cfg;
  try {
    cfg = fuzzyspec::parse_config(buf.str());
    if (cfg.command != command)
      return fail_config("command: CLI asks for '" + command +
                         "' but config declares '" + cfg.command + "'");
    // seed precedence: flag > env > config
    if (const char* env = std::getenv("FUZZYSPEC_SEED")) {
      try {
        cfg.seed = std::stoull(env);
      } catch (...) {
        return fail_config("FUZZYSPEC_SEED: not a valid seed");
      }
    }
    if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
  } catch (const fuzzyspec::config_error& e) {
    return fail_config(e.what());
  }

  try {
    return fuzzyspec::run_command(cfg);
  } catch (const fuzzyspec::config_error& e) {
    return fail_config(e.what());
  } catch (const std::exception& e) {
    return fail_numeric(&cfg, e.what());
  }
}
