#include "fuzzyspec/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fuzzyspec/deficiency.hpp"
#include "fuzzyspec/extensions.hpp"
#include "fuzzyspec/flows.hpp"
#include "fuzzyspec/io.hpp"
#include "fuzzyspec/rng.hpp"
#include "fuzzyspec/uncertainty.hpp"

namespace fuzzyspec {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr Complex kI{0.0, 1.0};

const std::set<std::string> kCommands = {
    "analyze", "spectrum",  "flow",       "uncertainty-curve",
    "gup",     "generate-algebra", "fuzzyb-demo"};

const std::map<std::string, std::set<std::string>> kModelKeys = {
    {"interval", {"copies", "grid", "backend"}},
    {"halfline", {"grid", "length"}},
    {"beta", {"beta", "cutoff", "grid"}},
    {"matrix", {"dim", "codim"}},
};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"analyze", {}},
    {"spectrum", {"theta"}},
    {"flow", {"theta", "theta_prime", "a"}},
    {"uncertainty-curve", {"xi_min", "xi_max", "xi_step"}},
    {"gup", {"n_states"}},
    {"generate-algebra", {"max_word_length", "extensions"}},
    {"fuzzyb-demo", {"scales"}},
};

const std::map<std::string, std::set<std::string>> kCommandModels = {
    {"analyze", {"interval", "halfline", "beta", "matrix"}},
    {"spectrum", {"interval"}},
    {"flow", {"interval"}},
    {"uncertainty-curve", {"interval", "beta", "matrix"}},
    {"gup", {"beta"}},
    {"generate-algebra", {"matrix"}},
    {"fuzzyb-demo", {"halfline"}},
};

double param_num(const nlohmann::json& p, const std::string& key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number())
    throw config_error("parameters." + key + ": must be a number");
  return p[key].get<double>();
}

int param_int(const nlohmann::json& p, const std::string& key, int fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number_integer())
    throw config_error("parameters." + key + ": must be an integer");
  return p[key].get<int>();
}

std::string param_str(const nlohmann::json& p, const std::string& key,
                      const std::string& fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_string())
    throw config_error("parameters." + key + ": must be a string");
  return p[key].get<std::string>();
}

void validate_parameters(const RunConfig& cfg) {
  const auto& p = cfg.parameters;
  std::set<std::string> allowed = kModelKeys.at(cfg.model);
  for (const auto& k : kCommandKeys.at(cfg.command)) allowed.insert(k);
  for (auto it = p.begin(); it != p.end(); ++it)
    if (!allowed.count(it.key()))
      throw config_error("parameters." + it.key() + ": unknown key");

  if (cfg.model == "beta") {
    if (param_num(p, "beta", 1.0) <= 0.0)
      throw config_error("parameters.beta: must be > 0");
    if (param_num(p, "cutoff", 20.0) <= 0.0)
      throw config_error("parameters.cutoff: must be > 0");
  }
  if (cfg.model == "interval" && param_int(p, "copies", 1) < 1)
    throw config_error("parameters.copies: must be >= 1");
  if (p.contains("grid") && param_int(p, "grid", 0) < 16)
    throw config_error("parameters.grid: must be >= 16");
  if (cfg.model == "halfline" && param_num(p, "length", 12.0) < 10.0)
    throw config_error("parameters.length: must be >= 10");
  if (cfg.model == "interval") {
    const std::string b = param_str(p, "backend", "spectral");
    if (b != "spectral" && b != "finite-difference")
      throw config_error("parameters.backend: must be 'spectral' or 'finite-difference'");
  }
  if (cfg.command == "flow") {
    const double a = param_num(p, "a", 0.25);
    if (!(a > 0.0 && a < 1.0))
      throw config_error("parameters.a: must lie in (0,1)");
  }
  if (cfg.command == "gup" && param_int(p, "n_states", 1000) < 1)
    throw config_error("parameters.n_states: must be >= 1");
}

Backend backend_of(const RunConfig& cfg) {
  return param_str(cfg.parameters, "backend", "spectral") == "finite-difference"
             ? Backend::FiniteDifference
             : Backend::Spectral;
}

OperatorOnDomain build_model_operator(const RunConfig& cfg,
                                      BetaAlgebraModel* beta_out = nullptr) {
  const auto& p = cfg.parameters;
  if (cfg.model == "interval")
    return build_interval_derivative(param_int(p, "copies", 1),
                                     param_int(p, "grid", 256), backend_of(cfg),
                                     cfg.hbar);
  if (cfg.model == "halfline")
    return build_halfline_derivative(param_int(p, "grid", 512),
                                     param_num(p, "length", 12.0), cfg.hbar);
  if (cfg.model == "beta") {
    BetaAlgebraModel m =
        build_beta_algebra(param_num(p, "beta", 1.0), param_num(p, "cutoff", 20.0),
                           param_int(p, "grid", 512), cfg.hbar);
    if (beta_out) *beta_out = m;
    return m.x_op;
  }
  // matrix: seeded random Hermitian testbed
  const int dim = param_int(p, "dim", 6);
  const int codim = param_int(p, "codim", 1);
  Rng rng(cfg.seed);
  const CMat a = rng.cgaussian_matrix(dim, dim);
  return build_matrix_model((a + a.adjoint()) * 0.5, codim, cfg.seed + 1);
}

ordered_json output_header(const RunConfig& cfg) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["config_hash"] = fnv1a_hex(cfg.raw_text);
  j["seed"] = cfg.seed;
  return j;
}

void write_json(const RunConfig& cfg, const std::string& name, ordered_json j) {
  write_text((fs::path(cfg.output_dir) / name).string(), j.dump(2) + "\n");
}

void run_analyze(const RunConfig& cfg) {
  const OperatorOnDomain op = build_model_operator(cfg);
  const DeficiencyReport rep = deficiency_spaces(op);
  ordered_json j = output_header(cfg);
  j["model"] = cfg.model;
  j["r_plus"] = rep.r_plus;
  j["r_minus"] = rep.r_minus;
  j["discrete_r_plus"] = rep.discrete_r_plus;
  j["discrete_r_minus"] = rep.discrete_r_minus;
  j["method"] = to_string(rep.method);
  j["classification"] = to_string(rep.classification);
  j["symmetry_defect"] = check_symmetry(op);
  write_json(cfg, "report.json", j);
}

void run_spectrum(const RunConfig& cfg) {
  const OperatorOnDomain op = build_model_operator(cfg);
  const double theta = param_num(cfg.parameters, "theta", 0.0);
  const CMat u = std::exp(kI * theta) * CMat::Identity(op.copies, op.copies);
  const SelfAdjointExtension ext =
      extend_by_boundary(op, make_extension_parameter(u, "cli"));
  const SpectralData& sd = spectrum(ext);
  CsvTable t;
  t.columns = {"index", "eigenvalue"};
  for (Eigen::Index k = 0; k < sd.eigenvalues.size(); ++k)
    t.rows.push_back({static_cast<double>(k), sd.eigenvalues[k]});
  const std::string hash = fnv1a_hex(cfg.raw_text);
  write_csv((fs::path(cfg.output_dir) / "spectrum.csv").string(), t, hash, cfg.seed);
  ordered_json j = output_header(cfg);
  j["theta"] = theta;
  j["resolved_window"] = ext.points_per_copy / 4.0;
  j["parent"] = ext.parent_tag;
  write_json(cfg, "spectrum_meta.json", j);
}

void run_flow(const RunConfig& cfg) {
  const OperatorOnDomain op = build_model_operator(cfg);
  const auto& p = cfg.parameters;
  const double theta = param_num(p, "theta", 0.0);
  const double theta_p = param_num(p, "theta_prime", M_PI / 2.0);
  const double a = param_num(p, "a", 0.25);
  CMat u = std::exp(kI * theta) * CMat::Identity(op.copies, op.copies);
  CMat up = std::exp(kI * theta_p) * CMat::Identity(op.copies, op.copies);
  const auto pu = make_extension_parameter(u, "u");
  const auto pup = make_extension_parameter(up, "u-prime");

  // Exact wrap when a is grid-commensurate, spectral exponential otherwise.
  const int rep_points = op.backend == Backend::Spectral
                             ? op.points_per_copy
                             : op.points_per_copy - 1;
  const double steps = a * cfg.hbar * rep_points;
  const FlowBackend fb = std::abs(steps - std::round(steps)) < 1e-9
                             ? FlowBackend::AnalyticWrap
                             : FlowBackend::SpectralExponential;
  const CMat t = local_phase_op(op, pu, pup, a, fb);
  const SelfAdjointExtension ext = extend_by_boundary(op, pu);
  const Grid& g = ext.grid;
  const int m = ext.points_per_copy;
  const double h = 1.0 / m;

  // One bump per region, all copies; per-point error against the piecewise
  // prediction (identity left of 1-a, phase (u')^-1 u right of it).
  const Complex phase = std::exp(kI * (theta - theta_p));
  CVec test = CVec::Zero(g.size());
  CVec expected = CVec::Zero(g.size());
  auto bump = [&](double lambda, double s0, double s1) {
    const double tt = (lambda - s0) / (s1 - s0);
    return (tt > 0.0 && tt < 1.0) ? std::pow(std::sin(M_PI * tt), 4) : 0.0;
  };
  const double pad = 3.0 * h;
  for (int c = 0; c < op.copies; ++c)
    for (int j = 0; j < m; ++j) {
      const double lambda = j * h;
      const double inner = bump(lambda, pad, 1.0 - a - pad);
      const double outer = bump(lambda, 1.0 - a + pad, 1.0 - pad);
      test[c * m + j] = inner + outer;
      expected[c * m + j] = inner + phase * outer;
    }
  const CVec got = t * test;

  CsvTable tab;
  tab.columns = {"lambda", "abs_error"};
  for (int j = 0; j < m; ++j)
    tab.rows.push_back({j * h, std::abs(got[j] - expected[j])});
  const std::string hash = fnv1a_hex(cfg.raw_text);
  write_csv((fs::path(cfg.output_dir) / "flow_error.csv").string(), tab, hash,
            cfg.seed);
}

void run_uncertainty_curve(const RunConfig& cfg) {
  BetaAlgebraModel beta_model;
  const OperatorOnDomain op = build_model_operator(cfg, &beta_model);
  const auto& p = cfg.parameters;
  const double lo = param_num(p, "xi_min", -5.0);
  const double hi = param_num(p, "xi_max", 5.0);
  const double step = param_num(p, "xi_step", 0.5);
  if (step <= 0.0) throw config_error("parameters.xi_step: must be > 0");
  std::vector<double> xi;
  for (double x = lo; x <= hi + 1e-12; x += step) xi.push_back(x);

  const UncertaintyCurve curve = uncertainty_curve(op, xi);
  CsvTable t;
  t.columns = {"xi", "dx_min", "residual"};
  for (std::size_t k = 0; k < curve.xi_values.size(); ++k)
    t.rows.push_back(
        {curve.xi_values[k], curve.dx_min[k], curve.solver_residuals[k]});
  const std::string hash = fnv1a_hex(cfg.raw_text);
  write_csv((fs::path(cfg.output_dir) / "curve.csv").string(), t, hash, cfg.seed);
  ordered_json j = output_header(cfg);
  j["model"] = cfg.model;
  j["skipped_xi"] = curve.skipped_xi;
  write_json(cfg, "curve_meta.json", j);
}

void run_gup(const RunConfig& cfg) {
  BetaAlgebraModel m;
  build_model_operator(cfg, &m);
  const int n_states = param_int(cfg.parameters, "n_states", 1000);
  const GupReport rep = sample_gup(m, n_states, cfg.seed);
  ordered_json j = output_header(cfg);
  j["n_states"] = rep.n_states;
  j["min_margin"] = rep.min_margin;
  j["violations"] = rep.violations;
  write_json(cfg, "gup.json", j);
}

void run_generate_algebra(const RunConfig& cfg) {
  const OperatorOnDomain op = build_model_operator(cfg);
  const int words = param_int(cfg.parameters, "max_word_length", 6);
  const int n_ext = param_int(cfg.parameters, "extensions", 3);
  const int dim = generated_algebra_dimension(op, words, n_ext, cfg.seed);
  ordered_json j = output_header(cfg);
  j["ambient_dim"] = op.ambient_dim();
  j["max_word_length"] = words;
  j["extensions"] = n_ext;
  j["span_dimension"] = dim;
  j["full_dimension"] = op.ambient_dim() * op.ambient_dim();
  write_json(cfg, "algebra.json", j);
}

void run_fuzzyb_demo(const RunConfig& cfg) {
  const OperatorOnDomain op = build_model_operator(cfg);
  const int n = param_int(cfg.parameters, "scales", 6);
  const LocalizationSequence seq = fuzzyB_localizing_sequence(op, n);
  CsvTable t;
  t.columns = {"scale", "dx"};
  for (int k = 0; k < n; ++k)
    t.rows.push_back({static_cast<double>(k), seq.dx_values[k]});
  const std::string hash = fnv1a_hex(cfg.raw_text);
  write_csv((fs::path(cfg.output_dir) / "localization.csv").string(), t, hash,
            cfg.seed);
  ordered_json j = output_header(cfg);
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (int k = 0; k < n; ++k) row.push_back(std::abs(seq.overlap_matrix(i, k)));
    rows.push_back(row);
  }
  j["overlaps"] = rows;
  write_json(cfg, "localization_meta.json", j);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw config_error("config root must be an object");

  const std::set<std::string> top = {"command", "model",      "parameters",
                                     "output_dir", "hbar",    "seed"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!top.count(it.key())) throw config_error(it.key() + ": unknown key");

  RunConfig cfg;
  cfg.raw_text = text;
  if (!doc.contains("command") || !doc["command"].is_string())
    throw config_error("command: required string");
  cfg.command = doc["command"].get<std::string>();
  if (!kCommands.count(cfg.command))
    throw config_error("command: unknown command '" + cfg.command + "'");

  if (!doc.contains("model") || !doc["model"].is_string())
    throw config_error("model: required string");
  cfg.model = doc["model"].get<std::string>();
  if (!kModelKeys.count(cfg.model))
    throw config_error("model: unknown model '" + cfg.model + "'");
  if (!kCommandModels.at(cfg.command).count(cfg.model))
    throw config_error("model: '" + cfg.model + "' not valid for command '" +
                       cfg.command + "'");

  if (doc.contains("parameters")) {
    if (!doc["parameters"].is_object())
      throw config_error("parameters: must be an object");
    cfg.parameters = doc["parameters"];
  } else {
    cfg.parameters = nlohmann::json::object();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string())
      throw config_error("output_dir: must be a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("hbar")) {
    if (!doc["hbar"].is_number() || doc["hbar"].get<double>() <= 0.0)
      throw config_error("hbar: must be a positive number");
    cfg.hbar = doc["hbar"].get<double>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      throw config_error("seed: must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  validate_parameters(cfg);
  return cfg;
}

int run_command(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  if (cfg.command == "analyze") run_analyze(cfg);
  else if (cfg.command == "spectrum") run_spectrum(cfg);
  else if (cfg.command == "flow") run_flow(cfg);
  else if (cfg.command == "uncertainty-curve") run_uncertainty_curve(cfg);
  else if (cfg.command == "gup") run_gup(cfg);
  else if (cfg.command == "generate-algebra") run_generate_algebra(cfg);
  else if (cfg.command == "fuzzyb-demo") run_fuzzyb_demo(cfg);
  else throw config_error("command: unknown command '" + cfg.command + "'");

  // Companion plot script for whatever CSVs this run produced.
  std::vector<std::string> csvs;
  for (const auto& entry : fs::directory_iterator(cfg.output_dir))
    if (entry.path().extension() == ".csv") csvs.push_back(entry.path().string());
  std::sort(csvs.begin(), csvs.end());
  if (!csvs.empty())
    write_text((fs::path(cfg.output_dir) / "plot.gp").string(),
               emit_plot_script(csvs));
  return 0;
}

std::string emit_plot_script(const std::vector<std::string>& csv_paths) {
  std::string script =
      "set datafile separator ','\nset key outside\nset grid\n";
  std::string plot_items;
  for (const auto& path : csv_paths) {
    std::ifstream f(path);
    if (!f) throw numerical_error("emit_plot_script: missing file " + path);
    std::string line;
    int data_rows = 0;
    while (std::getline(f, line))
      if (!line.empty() && line[0] != '#') ++data_rows;
    // Reference files by name only: the script sits next to the CSVs and
    // must not leak the output directory (re-runs byte-compare outputs).
    const std::string name = fs::path(path).filename().string();
    if (data_rows <= 1) {
      script += "# empty data range guard: " + name + " has no data rows\n";
      continue;
    }
    if (!plot_items.empty()) plot_items += ", \\\n     ";
    plot_items += "'" + name + "' skip 2 using 1:2 with lines title '" +
                  fs::path(path).stem().string() + "'";
  }
  if (plot_items.empty())
    script += "# nothing to plot\n";
  else
    script += "plot " + plot_items + "\n";
  return script;
}

}  // namespace fuzzyspec
