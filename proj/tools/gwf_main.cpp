// Command-line front end: wires JSON configs to the library experiments and
// writes the documented result files plus a run manifest.

#include "gwf/gaussian.hpp"
#include "gwf/io.hpp"
#include "gwf/lrmr.hpp"
#include "gwf/measurement_model.hpp"
#include "gwf/radar.hpp"
#include "gwf/solver.hpp"
#include "gwf/random.hpp"
#include "gwf/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// exit codes: 0 success, 2 I/O, 3 container format, 4 config, 5 solver
constexpr int kExitIo = 2;
constexpr int kExitFormat = 3;
constexpr int kExitConfig = 4;
constexpr int kExitSolver = 5;

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ManifestWriter {
  std::string command;
  json config;
  std::vector<std::string> outputs;
  std::string started = timestamp_utc();

  void write(const fs::path& out_dir) const {
    json manifest;
    manifest["command"] = command;
    manifest["tool_version"] = gwf::kVersion;
    manifest["started_utc"] = started;
    manifest["finished_utc"] = timestamp_utc();
    manifest["config"] = config;
    manifest["outputs"] = outputs;
    gwf::io::write_text_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
  }
};

json load_json_file(const fs::path& path) {
  const std::string text = gwf::io::read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw gwf::ConfigError("cannot parse '" + path.string() + "': " + e.what());
  }
}

json load_manifest_config(const fs::path& path, const std::string& command) {
  const json manifest = load_json_file(path);
  std::vector<std::string> errors;
  if (!manifest.contains("command") || manifest["command"] != command)
    errors.push_back("manifest command mismatch (expected '" + command + "')");
  if (!manifest.contains("config")) errors.push_back("manifest lacks a config object");
  if (!errors.empty()) {
    std::string msg = "invalid manifest '" + path.string() + "':";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw gwf::ConfigError(msg);
  }
  return manifest["config"];
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw gwf::IoError("cannot create output dir '" + dir.string() + "': " + ec.message());
}

// --- schema helpers -------------------------------------------------------

struct SchemaCheck {
  const json& obj;
  std::string scope;
  std::vector<std::string>& errors;

  bool has(const std::string& key) const { return obj.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback, bool required = false) const {
    if (!obj.contains(key)) {
      if (required) errors.push_back(scope + "." + key + ": missing required field");
      return fallback;
    }
    try {
      return obj.at(key).get<T>();
    } catch (const json::exception&) {
      errors.push_back(scope + "." + key + ": wrong type");
      return fallback;
    }
  }
};

void raise_if_errors(const std::vector<std::string>& errors, const std::string& what) {
  if (errors.empty()) return;
  std::string msg = what + " violates the config schema:";
  for (const auto& e : errors) msg += "\n  - " + e;
  throw gwf::ConfigError(msg);
}

gwf::SolverConfig parse_solver_config(const json& j, const std::string& scope) {
  std::vector<std::string> errors;
  SchemaCheck check{j, scope, errors};
  gwf::SolverConfig config;
  config.max_iters = check.get<std::int64_t>("max_iters", config.max_iters);
  config.normalize_by_init = check.get<bool>("normalize_by_init", true);
  config.stop_tol = check.get<double>("stop_tol", 0.0);
  config.record_every = check.get<std::int64_t>("record_every", 1);
  if (check.has("step_schedule")) {
    const json& sched = j.at("step_schedule");
    SchemaCheck sc{sched, scope + ".step_schedule", errors};
    const std::string kind = sc.get<std::string>("kind", "ramp", true);
    if (kind == "ramp") {
      config.schedule = gwf::RampStep{sc.get<double>("tau0", 33000.0),
                                      sc.get<double>("mu_max", 0.2)};
    } else if (kind == "fixed") {
      config.schedule = gwf::FixedStep{sc.get<double>("mu", 0.1, true)};
    } else {
      errors.push_back(scope + ".step_schedule.kind: expected 'ramp' or 'fixed'");
    }
  }
  raise_if_errors(errors, scope);
  try {
    config.validate();
  } catch (const gwf::ConfigError& e) {
    throw gwf::ConfigError(scope + ": " + e.what());
  }
  return config;
}

json solver_config_to_json(const gwf::SolverConfig& config) {
  json j;
  j["max_iters"] = config.max_iters;
  j["normalize_by_init"] = config.normalize_by_init;
  j["stop_tol"] = config.stop_tol;
  j["record_every"] = config.record_every;
  if (const auto* fixed = std::get_if<gwf::FixedStep>(&config.schedule)) {
    j["step_schedule"] = {{"kind", "fixed"}, {"mu", fixed->mu}};
  } else {
    const auto& ramp = std::get<gwf::RampStep>(config.schedule);
    j["step_schedule"] = {{"kind", "ramp"}, {"tau0", ramp.tau0}, {"mu_max", ramp.mu_max}};
  }
  return j;
}

gwf::radar::GeometryConfig parse_geometry_config(const json& j) {
  std::vector<std::string> errors;
  gwf::radar::GeometryConfig config = gwf::radar::small_scene_config();
  if (j.contains("scene")) {
    SchemaCheck sc{j.at("scene"), "scene", errors};
    config.extent_m = sc.get<double>("extent_m", config.extent_m);
    config.pixel_m = sc.get<double>("pixel_m", config.pixel_m);
    config.nx = sc.get<int>("nx", 0);
    config.ny = sc.get<int>("ny", 0);
  }
  if (j.contains("receivers")) {
    SchemaCheck sc{j.at("receivers"), "receivers", errors};
    config.receiver_count = sc.get<int>("count", config.receiver_count);
    config.receiver_radius_m = sc.get<double>("radius_m", config.receiver_radius_m);
    config.receiver_height_m = sc.get<double>("height_m", config.receiver_height_m);
  }
  if (j.contains("transmitter_m")) {
    try {
      const auto v = j.at("transmitter_m").get<std::vector<double>>();
      if (v.size() != 3)
        errors.push_back("transmitter_m: expected [x, y, z] in meters");
      else
        config.transmitter_m = Eigen::Vector3d(v[0], v[1], v[2]);
    } catch (const json::exception&) {
      errors.push_back("transmitter_m: wrong type");
    }
  }
  if (j.contains("waveform")) {
    SchemaCheck sc{j.at("waveform"), "waveform", errors};
    config.center_freq_hz = sc.get<double>("center_freq_hz", config.center_freq_hz);
    config.bandwidth_hz = sc.get<double>("bandwidth_hz", config.bandwidth_hz);
    config.freq_samples = sc.get<int>("freq_samples", config.freq_samples);
  }
  raise_if_errors(errors, "radar config");
  return config;
}

json geometry_config_to_json(const gwf::radar::GeometryConfig& c) {
  json j;
  j["scene"] = {{"extent_m", c.extent_m}, {"pixel_m", c.pixel_m}, {"nx", c.nx}, {"ny", c.ny}};
  j["receivers"] = {{"count", c.receiver_count},
                    {"radius_m", c.receiver_radius_m},
                    {"height_m", c.receiver_height_m}};
  j["transmitter_m"] = {c.transmitter_m.x(), c.transmitter_m.y(), c.transmitter_m.z()};
  j["waveform"] = {{"center_freq_hz", c.center_freq_hz},
                   {"bandwidth_hz", c.bandwidth_hz},
                   {"freq_samples", c.freq_samples}};
  return j;
}

gwf::radar::PhantomSpec parse_phantom_spec(const json& j) {
  std::vector<std::string> errors;
  gwf::radar::PhantomSpec spec;
  if (j.contains("seed")) {
    return gwf::radar::PhantomSpec::random_scene(j.at("seed").get<std::uint64_t>());
  }
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) {
      SchemaCheck sc{p, "phantom.points[]", errors};
      spec.points.push_back({sc.get<double>("x_frac", 0.0, true),
                             sc.get<double>("y_frac", 0.0, true),
                             sc.get<double>("amplitude", 1.0, true)});
    }
  }
  if (j.contains("rects")) {
    for (const auto& p : j.at("rects")) {
      SchemaCheck sc{p, "phantom.rects[]", errors};
      spec.rects.push_back(
          {sc.get<double>("x0_frac", 0.0, true), sc.get<double>("y0_frac", 0.0, true),
           sc.get<double>("x1_frac", 0.0, true), sc.get<double>("y1_frac", 0.0, true),
           sc.get<double>("amplitude", 1.0, true)});
    }
  }
  raise_if_errors(errors, "phantom spec");
  return spec;
}

json phantom_spec_to_json(const gwf::radar::PhantomSpec& spec) {
  json j;
  j["points"] = json::array();
  for (const auto& p : spec.points)
    j["points"].push_back(
        {{"x_frac", p.x_frac}, {"y_frac", p.y_frac}, {"amplitude", p.amplitude}});
  j["rects"] = json::array();
  for (const auto& r : spec.rects)
    j["rects"].push_back({{"x0_frac", r.x0_frac},
                          {"y0_frac", r.y0_frac},
                          {"x1_frac", r.x1_frac},
                          {"y1_frac", r.y1_frac},
                          {"amplitude", r.amplitude}});
  return j;
}

// --- subcommand payloads ---------------------------------------------------

int run_solve(const json& config, const fs::path& out_dir) {
  std::vector<std::string> errors;
  SchemaCheck check{config, "solve", errors};
  const std::string ensemble_path = check.get<std::string>("ensemble", "", true);
  const std::string data_path = check.get<std::string>("data", "", true);
  raise_if_errors(errors, "solve config");
  gwf::SolverConfig solver_config =
      config.contains("solver") ? parse_solver_config(config.at("solver"), "solver")
                                : gwf::SolverConfig{};

  const gwf::MeasurementEnsemble ensemble = gwf::io::read_ensemble(ensemble_path);
  const gwf::Vec data = gwf::io::read_data(data_path);

  ManifestWriter manifest;
  manifest.command = "solve";
  manifest.config = {{"ensemble", ensemble_path},
                     {"data", data_path},
                     {"solver", solver_config_to_json(solver_config)}};

  const gwf::SolverTrace trace = gwf::solve(ensemble, data, solver_config);

  gwf::io::write_trace_csv(out_dir / "trace.csv", trace);
  gwf::io::write_signal(out_dir / "estimate.ifs", trace.final_estimate);

  json summary;
  summary["n"] = ensemble.n();
  summary["m"] = ensemble.m_count();
  summary["iterations"] = trace.iterations.empty() ? 0 : trace.iterations.back().k;
  summary["final_objective"] =
      trace.iterations.empty() ? 0.0 : trace.iterations.back().objective;
  summary["init_eigenvalue"] = trace.init_eigenvalue;
  summary["flops"] = trace.iterations.empty() ? 0 : trace.iterations.back().flops;
  summary["config"] = solver_config_to_json(solver_config);
  gwf::io::write_text_file_atomic(out_dir / "summary.json", summary.dump(2) + "\n");

  manifest.outputs = {"trace.csv", "estimate.ifs", "summary.json"};
  manifest.write(out_dir);
  return 0;
}

int run_gaussian(const json& config, int threads, const fs::path& out_dir) {
  std::vector<std::string> errors;
  SchemaCheck check{config, "gaussian", errors};
  const int n = check.get<int>("n", 128);
  const auto grid = check.get<std::vector<double>>("grid", {}, true);
  const int trials = check.get<int>("trials", 20);
  const std::int64_t iters = check.get<std::int64_t>("iters", 2500);
  const std::uint64_t seed = check.get<std::uint64_t>("seed", 0, true);
  const std::string signal = check.get<std::string>("signal", "lowpass");
  if (n < 1) errors.push_back("gaussian.n: must be >= 1");
  if (trials < 1) errors.push_back("gaussian.trials: must be >= 1");
  if (iters < 1) errors.push_back("gaussian.iters: must be >= 1");
  for (double g : grid)
    if (!(g > 0.0)) errors.push_back("gaussian.grid: oversampling factors must be > 0");
  if (grid.empty()) errors.push_back("gaussian.grid: at least one oversampling factor");
  raise_if_errors(errors, "gaussian config");
  const gwf::gauss::SignalKind kind = gwf::gauss::signal_kind_from_name(signal);

  ManifestWriter manifest;
  manifest.command = "gaussian";
  manifest.config = {{"n", n},         {"grid", grid}, {"trials", trials},
                     {"iters", iters}, {"seed", seed}, {"signal", signal}};

  const gwf::gauss::PhaseTransitionResult result =
      gwf::gauss::run_phase_transition(n, grid, trials, iters, seed, kind, threads);

  std::vector<std::string> rows;
  for (const auto& row : result.rows) {
    rows.push_back(gwf::io::format_double(row.oversampling) + "," +
                   std::to_string(row.trials) + "," +
                   gwf::io::format_double(double(row.success_strict) / double(row.trials)) +
                   "," +
                   gwf::io::format_double(double(row.success_moderate) / double(row.trials)));
  }
  gwf::io::write_table_csv(out_dir / "phase_transition.csv",
                           "oversampling,trials,p_success_1e5,p_success_1e3", rows);

  manifest.outputs = {"phase_transition.csv"};
  manifest.write(out_dir);
  return 0;
}

int run_theory(const json& config, const fs::path& out_dir) {
  std::vector<std::string> errors;
  SchemaCheck check{config, "theory", errors};
  const std::string mode = check.get<std::string>("mode", "", true);
  raise_if_errors(errors, "theory config");

  ManifestWriter manifest;
  manifest.command = "theory";

  if (mode == "curves") {
    const double max_delta = check.get<double>("max_delta", 0.214);
    const int points = check.get<int>("points", 100);
    if (points < 1) errors.push_back("theory.points: must be >= 1");
    if (max_delta < 0.0 || max_delta > 0.214)
      errors.push_back("theory.max_delta: must lie in [0, 0.214]");
    raise_if_errors(errors, "theory config");

    std::vector<double> grid;
    for (int i = 0; i < points; ++i)
      grid.push_back(points == 1 ? max_delta
                                 : max_delta * double(i) / double(points - 1));
    const auto rows = gwf::theory::figure1_curves(grid);
    std::vector<std::string> lines;
    for (const auto& r : rows)
      lines.push_back(gwf::io::format_double(r.delta1) + "," +
                      gwf::io::format_double(r.epsilon) + "," +
                      gwf::io::format_double(r.delta2) + "," + gwf::io::format_double(r.c) +
                      "," + gwf::io::format_double(r.h));
    gwf::io::write_table_csv(out_dir / "figure1.csv", "delta1,epsilon,delta2,c,h", lines);

    manifest.config = {{"mode", "curves"}, {"max_delta", max_delta}, {"points", points}};
    manifest.outputs = {"figure1.csv"};
  } else if (mode == "ric") {
    const int n = check.get<int>("n", 16);
    const int m = check.get<int>("m", 256);
    const int trials = check.get<int>("trials", 200);
    const std::uint64_t seed = check.get<std::uint64_t>("seed", 0, true);
    if (n < 1 || m < 1 || trials < 1)
      errors.push_back("theory.ric: n, m, trials must be >= 1");
    raise_if_errors(errors, "theory config");

    const gwf::MeasurementEnsemble ensemble =
        gwf::gauss::gen_gaussian_ensemble(n, m, gwf::derive_seed(seed, 0xE45u));
    const gwf::theory::RicEstimate estimate =
        gwf::theory::estimate_ric_rank1(ensemble, trials, seed);

    json report;
    report["delta_hat"] = estimate.delta_hat;
    report["trials"] = trials;
    report["n"] = n;
    report["m"] = m;
    report["seed"] = seed;
    gwf::io::write_text_file_atomic(out_dir / "ric.json", report.dump(2) + "\n");

    manifest.config = {{"mode", "ric"}, {"n", n}, {"m", m}, {"trials", trials}, {"seed", seed}};
    manifest.outputs = {"ric.json"};
  } else {
    throw gwf::ConfigError("theory.mode: expected 'curves' or 'ric', got '" + mode + "'");
  }
  manifest.write(out_dir);
  return 0;
}

int run_radar(const json& config, const fs::path& out_dir) {
  std::vector<std::string> errors;
  SchemaCheck check{config, "radar", errors};
  const std::string preset = check.get<std::string>("preset", "small");
  const bool compare = check.get<bool>("compare", false);
  const bool sweep_lambda = check.get<bool>("sweep_lambda", false);
  raise_if_errors(errors, "radar config");

  gwf::radar::GeometryConfig geom_config;
  if (preset == "small") {
    geom_config = gwf::radar::small_scene_config();
  } else if (preset == "paper") {
    geom_config = gwf::radar::paper_scene_config();
    std::cerr << "warning: the paper-scale preset (N = 961, 10000 iterations) runs for "
                 "tens of minutes\n";
  } else if (preset == "custom") {
    geom_config = parse_geometry_config(config);
  } else {
    throw gwf::ConfigError("radar.preset: expected small|paper|custom, got '" + preset + "'");
  }

  gwf::radar::PhantomSpec phantom_spec =
      config.contains("phantom") ? parse_phantom_spec(config.at("phantom"))
                                 : gwf::radar::PhantomSpec::default_scene();

  gwf::SolverConfig solver_config;
  solver_config.max_iters = preset == "paper" ? 10000 : 8000;
  solver_config.schedule = gwf::RampStep{33000.0, 0.2};
  solver_config.record_every = 10;
  if (config.contains("solver"))
    solver_config = parse_solver_config(config.at("solver"), "solver");

  const gwf::radar::SceneGeometry geometry = gwf::radar::make_geometry(geom_config);
  const gwf::radar::Phantom phantom = gwf::radar::make_phantom(phantom_spec, geometry);

  ManifestWriter manifest;
  manifest.command = "radar";
  manifest.config = geometry_config_to_json(geom_config);
  manifest.config["preset"] = preset;
  manifest.config["phantom"] = phantom_spec_to_json(phantom_spec);
  manifest.config["solver"] = solver_config_to_json(solver_config);
  manifest.config["compare"] = compare;
  manifest.config["sweep_lambda"] = sweep_lambda;

  const gwf::radar::ImagingResult result =
      gwf::radar::run_imaging_experiment(geometry, phantom, solver_config);

  gwf::io::write_trace_csv(out_dir / "trace.csv", result.trace);
  gwf::io::write_image_csv(out_dir / "image.csv", result.image, geometry.nx, geometry.ny);
  gwf::io::write_image_pgm(out_dir / "image.pgm", result.image, geometry.nx, geometry.ny);
  gwf::io::write_image_csv(out_dir / "truth.csv", phantom.reflectivity, geometry.nx,
                           geometry.ny);
  gwf::io::write_image_pgm(out_dir / "truth.pgm", phantom.reflectivity, geometry.nx,
                           geometry.ny);

  json summary;
  summary["n"] = result.n;
  summary["m"] = result.m;
  summary["relative_error"] = result.relative_error;
  summary["iterations"] = solver_config.max_iters;
  summary["init_eigenvalue"] = result.trace.init_eigenvalue;
  gwf::io::write_text_file_atomic(out_dir / "summary.json", summary.dump(2) + "\n");

  manifest.outputs = {"trace.csv", "image.csv", "image.pgm", "truth.csv", "truth.pgm",
                      "summary.json"};

  if (compare) {
    gwf::radar::ComparisonConfig cmp;
    cmp.gwf_iters = solver_config.max_iters;
    cmp.sweep_lambda = sweep_lambda;
    const gwf::radar::ComparisonResult comparison =
        gwf::radar::run_comparison(geometry, phantom, cmp);
    std::vector<std::string> rows;
    for (const auto& series : comparison.series) {
      if (series.flops.empty()) continue;
      rows.push_back(series.method + "," + std::to_string(series.flops.back()) + "," +
                     gwf::io::format_double(series.lifted_mse.back()) + "," +
                     gwf::io::format_double(series.signal_mse.back()));
      std::vector<std::string> series_rows;
      for (size_t i = 0; i < series.flops.size(); ++i)
        series_rows.push_back(series.method + "," + std::to_string(series.flops[i]) + "," +
                              gwf::io::format_double(series.lifted_mse[i]) + "," +
                              gwf::io::format_double(series.signal_mse[i]));
      gwf::io::write_table_csv(out_dir / ("comparison_" + series.method + ".csv"),
                               "method,flops,lifted_mse,signal_mse", series_rows);
      manifest.outputs.push_back("comparison_" + series.method + ".csv");
    }
    gwf::io::write_table_csv(out_dir / "comparison.csv", "method,flops,lifted_mse,signal_mse",
                             rows);
    manifest.outputs.push_back("comparison.csv");
  }

  manifest.write(out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Wirtinger Flow for interferometric inversion"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  int threads = 1;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for Monte-Carlo trials")
      ->capture_default_str();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Run GWF on stored ensemble + data");
  std::string ensemble_path, data_path, solver_config_path, solve_manifest;
  solve_cmd->add_option("--ensemble", ensemble_path, "IFN1 ensemble container");
  solve_cmd->add_option("--data", data_path, "IFD1 data container");
  solve_cmd->add_option("--config", solver_config_path, "Solver config JSON");
  solve_cmd->add_option("--from-manifest", solve_manifest, "Re-run a recorded manifest");

  // gaussian
  auto* gaussian_cmd =
      app.add_subcommand("gaussian", "Empirical recovery-probability phase transition");
  int g_n = 128, g_trials = 20;
  std::int64_t g_iters = 2500;
  std::uint64_t g_seed = 0;
  bool g_seed_set = false;
  std::vector<double> g_grid;
  std::string g_signal = "lowpass", gaussian_manifest;
  gaussian_cmd->add_option("--n", g_n, "Signal dimension")->capture_default_str();
  gaussian_cmd->add_option("--grid", g_grid, "Oversampling factors M/N")->delimiter(',');
  gaussian_cmd->add_option("--trials", g_trials, "Trials per grid point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gaussian_cmd->add_option("--iters", g_iters, "GWF iterations per trial")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gaussian_cmd->add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { g_seed = s; g_seed_set = true; },
      "Base seed (required; no wall-clock seeding)");
  gaussian_cmd->add_option("--signal", g_signal, "Signal model: lowpass|gaussian")
      ->capture_default_str();
  gaussian_cmd->add_option("--from-manifest", gaussian_manifest, "Re-run a recorded manifest");

  // theory
  auto* theory_cmd = app.add_subcommand("theory", "Recovery-theory constants and RIC probes");
  bool t_curves = false, t_ric = false;
  double t_max_delta = 0.214;
  int t_points = 100, t_n = 16, t_m = 256, t_trials = 200;
  std::uint64_t t_seed = 0;
  bool t_seed_set = false;
  std::string theory_manifest;
  theory_cmd->add_flag("--curves", t_curves, "Emit the constants-vs-delta1 table");
  theory_cmd->add_flag("--ric", t_ric, "Estimate the empirical rank-1 RIC");
  theory_cmd->add_option("--max-delta", t_max_delta, "Grid endpoint")->capture_default_str();
  theory_cmd->add_option("--points", t_points, "Grid size")->capture_default_str();
  theory_cmd->add_option("--n", t_n, "Signal dimension (ric)")->capture_default_str();
  theory_cmd->add_option("--m", t_m, "Measurement count (ric)")->capture_default_str();
  theory_cmd->add_option("--trials", t_trials, "Probe count (ric)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  theory_cmd->add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { t_seed = s; t_seed_set = true; },
      "Base seed for the RIC probes");
  theory_cmd->add_option("--from-manifest", theory_manifest, "Re-run a recorded manifest");

  // radar
  auto* radar_cmd = app.add_subcommand("radar", "Multistatic radar imaging experiments");
  std::string r_preset = "small", r_config_path, r_phantom_path, radar_manifest;
  bool r_compare = false, r_sweep = false;
  std::optional<std::uint64_t> r_phantom_seed;
  std::optional<std::int64_t> r_iters;
  radar_cmd->add_option("--preset", r_preset, "small | paper | custom")
      ->capture_default_str();
  radar_cmd->add_option("--config", r_config_path, "Geometry config JSON (preset custom)");
  radar_cmd->add_option("--phantom", r_phantom_path, "Phantom spec JSON");
  radar_cmd->add_option("--phantom-seed", r_phantom_seed, "Seeded random phantom");
  radar_cmd->add_option("--iters", r_iters, "GWF iterations");
  radar_cmd->add_flag("--compare", r_compare, "Also run the lifted Uzawa baselines");
  radar_cmd->add_flag("--sweep-lambda", r_sweep,
                      "Sweep the trace-regularization weight and report the best");
  radar_cmd->add_option("--from-manifest", radar_manifest, "Re-run a recorded manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    ensure_out_dir(out_dir);

    if (solve_cmd->parsed()) {
      json config;
      if (!solve_manifest.empty()) {
        config = load_manifest_config(solve_manifest, "solve");
      } else {
        if (ensemble_path.empty() || data_path.empty())
          throw gwf::ConfigError("solve: --ensemble and --data are required");
        config["ensemble"] = ensemble_path;
        config["data"] = data_path;
        if (!solver_config_path.empty())
          config["solver"] = load_json_file(solver_config_path);
      }
      return run_solve(config, out_dir);
    }

    if (gaussian_cmd->parsed()) {
      json config;
      if (!gaussian_manifest.empty()) {
        config = load_manifest_config(gaussian_manifest, "gaussian");
      } else {
        if (!g_seed_set)
          throw gwf::ConfigError("gaussian: --seed is mandatory (no wall-clock seeding)");
        if (g_grid.empty()) throw gwf::ConfigError("gaussian: --grid is required");
        config = {{"n", g_n},         {"grid", g_grid}, {"trials", g_trials},
                  {"iters", g_iters}, {"seed", g_seed}, {"signal", g_signal}};
      }
      return run_gaussian(config, threads, out_dir);
    }

    if (theory_cmd->parsed()) {
      json config;
      if (!theory_manifest.empty()) {
        config = load_manifest_config(theory_manifest, "theory");
      } else if (t_curves) {
        config = {{"mode", "curves"}, {"max_delta", t_max_delta}, {"points", t_points}};
      } else if (t_ric) {
        if (!t_seed_set)
          throw gwf::ConfigError("theory --ric: --seed is mandatory (no wall-clock seeding)");
        config = {{"mode", "ric"}, {"n", t_n}, {"m", t_m}, {"trials", t_trials},
                  {"seed", t_seed}};
      } else {
        throw gwf::ConfigError("theory: pass --curves or --ric");
      }
      return run_theory(config, out_dir);
    }

    if (radar_cmd->parsed()) {
      json config;
      if (!radar_manifest.empty()) {
        config = load_manifest_config(radar_manifest, "radar");
      } else {
        if (!r_config_path.empty()) {
          config = load_json_file(r_config_path);
          config["preset"] = "custom";
        } else {
          config["preset"] = r_preset;
        }
        if (!r_phantom_path.empty())
          config["phantom"] = load_json_file(r_phantom_path);
        else if (r_phantom_seed)
          config["phantom"] = {{"seed", *r_phantom_seed}};
        if (r_iters) {
          json solver;
          solver["max_iters"] = *r_iters;
          solver["record_every"] = 10;
          config["solver"] = solver;
        }
        config["compare"] = r_compare;
        config["sweep_lambda"] = r_sweep;
      }
      return run_radar(config, out_dir);
    }

    throw gwf::ConfigError("no subcommand given");
  } catch (const gwf::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const gwf::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const gwf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gwf::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const gwf::InitializationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const gwf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
