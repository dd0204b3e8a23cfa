#include "axiflow/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "axiflow/io.hpp"
#include "axiflow/rescale.hpp"

namespace axiflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {
    "scenario", "r",      "eps",     "m",   "r0",        "amp",       "c",
    "x0",       "a",      "b",       "n_cells",          "kind",      "t_end",
    "dt_init",  "cfl",    "blowup_A2",     "snapshot_every", "output_dir"};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct LoadedProfile {
  RadiusProfile profile;
  double t{0.0};
};

// A snapshot file (has "rho") or a scenario description (has "scenario").
LoadedProfile load_profile(const std::string& path) {
  const auto j = read_json_file(path);
  if (j.is_object() && j.contains("scenario")) {
    return {Scenario::from_json(j).build(), 0.0};
  }
  auto snap = profile_from_json(j);
  return {std::move(snap.profile), snap.t};
}

json fit_to_json(const CatenoidFit& fit, std::span<const double> rho) {
  double mean = 0.0;
  for (double r : rho) mean += r;
  mean /= static_cast<double>(rho.size());
  const double rel = fit.rms_residual / mean;
  return {{"c5", fit.c5},
          {"x0", fit.x0},
          {"rms_residual", fit.rms_residual},
          {"relative_rms", rel},
          {"iterations", fit.iterations},
          {"quality", rel <= kPoorFitRelativeRms ? "good" : "poor"}};
}

int cmd_run(const std::string& config_path, const std::string& out_override, std::ostream& out) {
  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open " + config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + config_path + ": " + e.what());
  }
  auto cfg = RunConfig::from_json(j);
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (cfg.output_dir.empty()) throw ConfigError("no output_dir given");
  if (!cfg.scenario.flowable()) {
    throw ConfigError("scenario '" + std::string(to_string(cfg.scenario.kind)) +
                      "' is geometry-only and cannot be flowed");
  }

  // everything is computed before the output directory is touched
  const auto initial = cfg.scenario.build();
  const auto start = std::chrono::steady_clock::now();
  const auto traj = run(initial, cfg.flow);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

  json manifest;
  manifest["config"] = cfg.to_json();
  manifest["wall_time_s"] = wall.count();
  manifest["steps"] = traj.step_log.size() - 1;
  manifest["t_final"] = traj.step_log.back().t;
  write_trajectory(cfg.output_dir, traj, manifest);

  out << "run: " << to_string(traj.termination) << " at t = " << traj.step_log.back().t
      << " after " << traj.step_log.size() - 1 << " steps -> " << cfg.output_dir << '\n';
  return kExitOk;
}

int cmd_monitor(const std::string& dir, std::ostream& out) {
  const auto traj = read_trajectory(dir);
  const auto report = build_report(traj);
  json arr = json::array();
  for (const auto& rec : report.checks) arr.push_back(to_json(rec));
  write_json_file(fs::path(dir) / "monitor_report.json", arr);
  out << arr.dump(2) << '\n';
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

struct RescaleOptions {
  std::string dir;
  std::optional<double> deadline;
  std::string out_dir;
  double eps1{1e-3};
  double eps2{1e-3};
  double window{0.0};
};

int cmd_rescale(const RescaleOptions& opt, std::ostream& out) {
  const auto traj = read_trajectory(opt.dir);
  const double deadline = opt.deadline.value_or(traj.snapshots.back().t);
  const auto event = max_curvature_event(traj, deadline);
  const auto report = build_report(traj);
  const double c5_bound = c5_from_c0(report.c0);

  const fs::path out_dir = opt.out_dir.empty() ? fs::path(opt.dir) / "rescaled" : fs::path(opt.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("rescaled_", 0) == 0 && entry.path().extension() == ".json") {
      fs::remove(entry.path());
    }
  }

  CheckRecord height;
  height.name = "rescaled_height_bound";
  height.worst_violation = -INFINITY;
  std::optional<RescaledProfile> at_event;
  json names = json::array();
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const auto& snap = traj.snapshots[s];
    if (snap.t > event.t_i) continue;
    auto rp = rescale(snap, event, traj.kind);
    auto rec = check_rescaled_height_bound(rp, c5_bound);
    if (rec.worst_violation > height.worst_violation) height = rec;

    auto j = profile_to_json(rp.as_profile(), rp.t);
    j["alpha"] = rp.alpha;
    j["tau"] = rp.tau;
    if (rp.h_tilde) j["h_tilde"] = *rp.h_tilde;
    std::string name = snapshot_file_name(snap.step);
    name.replace(0, 8, "rescaled");
    write_json_file(out_dir / name, j);
    names.push_back(name);
    if (s == event.snapshot_index) at_event = std::move(rp);
  }

  json fit_report;
  fit_report["event"] = {{"alpha", event.alpha},
                         {"t_i", event.t_i},
                         {"node_index", event.node_index},
                         {"x1_i", event.x1_i},
                         {"snapshot_index", event.snapshot_index},
                         {"max_A_tilde", at_event->max_A_tilde()}};
  fit_report["constants"] = {
      {"c0", report.c0}, {"c4", report.c4}, {"C", report.C}, {"c5", c5_bound}};
  fit_report["height_bound"] = to_json(height);
  fit_report["snapshots"] = names;

  std::vector<double> fx;
  std::vector<double> frho;
  for (std::size_t j = 0; j < at_event->size(); ++j) {
    if (opt.window > 0.0 && std::abs(at_event->x_tilde[j]) > opt.window) continue;
    fx.push_back(at_event->x_tilde[j]);
    frho.push_back(at_event->rho_tilde[j]);
  }
  try {
    const auto fit = catenoid_fit(fx, frho);
    fit_report["fit"] = fit_to_json(fit, frho);
    const auto diag = contradiction_diagnostic(fit, report.c4, event.alpha, opt.eps1, opt.eps2);
    fit_report["contradiction"] = {
        {"log_argument", diag.log_argument},
        {"half_width", diag.half_width ? json(*diag.half_width) : json(nullptr)},
        {"non_positive_argument", diag.non_positive_argument()},
        {"eps1", opt.eps1},
        {"eps2", opt.eps2}};
  } catch (const FitDivergedError& e) {
    fit_report["fit"] = {{"quality", "diverged"}, {"error", e.what()}};
  }
  write_json_file(out_dir / "fit_report.json", fit_report);
  out << fit_report.dump(2) << '\n';
  return height.passed ? kExitOk : kExitCheckFailed;
}

int cmd_fit(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto loaded = load_profile(path);
  const auto x = loaded.profile.nodes();
  try {
    const auto fit = catenoid_fit(x, loaded.profile.rho());
    out << fit_to_json(fit, loaded.profile.rho()).dump(2) << '\n';
    return kExitOk;
  } catch (const FitDivergedError& e) {
    err << "fit-catenoid: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

int cmd_derive(const std::string& path, std::ostream& out) {
  const auto loaded = load_profile(path);
  const auto& profile = loaded.profile;
  const auto state = geometric_state(profile);
  const auto ids = identity_residuals(state);
  json j;
  j["t"] = loaded.t;
  j["x"] = profile.nodes();
  j["rho"] = std::vector<double>(profile.rho().begin(), profile.rho().end());
  j["y"] = state.y;
  j["v"] = state.v;
  j["p"] = state.p;
  j["k"] = state.k;
  j["q"] = state.q;
  j["H"] = state.H;
  j["A2"] = state.A2;
  j["surface_area"] = state.surface_area;
  j["enclosed_volume"] = state.enclosed_volume;
  j["h"] = average_mean_curvature(state, profile.dx());
  j["identity_residuals"] = {{"pq_vs_inverse_height", ids.pq_vs_inverse_height},
                             {"vy_vs_inverse_p", ids.vy_vs_inverse_p}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

} // namespace

RunConfig RunConfig::from_json(const json& input) {
  const json& j = (input.is_object() && input.contains("config")) ? input.at("config") : input;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kConfigKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  if (!j.contains("scenario")) throw ConfigError("config needs a \"scenario\"");
  try {
    RunConfig cfg;
    cfg.scenario = Scenario::from_json(j);
    cfg.flow.kind = flow_kind_from_string(j.value("kind", std::string("mcf")));
    cfg.flow.t_end = j.value("t_end", cfg.flow.t_end);
    cfg.flow.dt_init = j.value("dt_init", cfg.flow.dt_init);
    cfg.flow.cfl = j.value("cfl", cfg.flow.cfl);
    cfg.flow.blowup_A2 = j.value("blowup_A2", cfg.flow.blowup_A2);
    cfg.flow.snapshot_every = j.value("snapshot_every", cfg.flow.snapshot_every);
    cfg.flow.n_cells = cfg.scenario.n_cells;
    cfg.output_dir = j.value("output_dir", std::string());
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json RunConfig::to_json() const {
  json j = scenario.to_json();
  j["kind"] = flow.kind == FlowKind::MeanCurvature ? "mcf" : "volume";
  j["t_end"] = flow.t_end;
  j["dt_init"] = flow.dt_init;
  j["cfl"] = flow.cfl;
  j["blowup_A2"] = flow.blowup_A2;
  j["snapshot_every"] = flow.snapshot_every;
  j["output_dir"] = output_dir;
  return j;
}

json to_json(const CheckRecord& rec) {
  json constants = json::object();
  for (const auto& [k, v] : rec.constants) constants[k] = finite_or_null(v);
  return {{"name", rec.name},
          {"worst_violation", finite_or_null(rec.worst_violation)},
          {"at_time", rec.at_time},
          {"passed", rec.passed},
          {"tolerance", rec.tolerance},
          {"constants", constants}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Axially symmetric (volume-preserving) mean curvature flow toolkit", "axiflow"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "Flow a scenario and write a trajectory directory");
  run_cmd->add_option("config", config_path, "Config JSON (or a manifest.json to reproduce a run)")
      ->required();
  run_cmd->add_option("--out", run_out, "Override the config's output_dir");

  std::string monitor_dir;
  auto* monitor_cmd =
      app.add_subcommand("monitor", "Audit a trajectory; exit 1 if any check fails");
  monitor_cmd->add_option("dir", monitor_dir, "Trajectory directory")->required();

  RescaleOptions ropt;
  double deadline = 0.0;
  auto* rescale_cmd =
      app.add_subcommand("rescale", "Rescale snapshots about the max-curvature event and fit a catenoid");
  rescale_cmd->add_option("dir", ropt.dir, "Trajectory directory")->required();
  auto* deadline_opt =
      rescale_cmd->add_option("--deadline", deadline, "Latest snapshot time considered (default: last)");
  rescale_cmd->add_option("--out", ropt.out_dir, "Output directory (default: DIR/rescaled)");
  rescale_cmd->add_option("--eps1", ropt.eps1, "Diagnostic slack eps1")->capture_default_str();
  rescale_cmd->add_option("--eps2", ropt.eps2, "Diagnostic slack eps2")->capture_default_str();
  rescale_cmd->add_option("--window", ropt.window,
                          "Fit only nodes with |x~| <= WINDOW (0: all nodes)")
      ->capture_default_str();

  std::string fit_path;
  auto* fit_cmd = app.add_subcommand("fit-catenoid", "Fit c cosh((x - x0)/c) to a profile");
  fit_cmd->add_option("file", fit_path, "Snapshot or scenario JSON")->required();

  std::string derive_path;
  auto* derive_cmd = app.add_subcommand("derive", "Dump the geometric state of a profile");
  derive_cmd->add_option("file", derive_path, "Snapshot or scenario JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, run_out, out);
    if (*monitor_cmd) return cmd_monitor(monitor_dir, out);
    if (*rescale_cmd) {
      if (*deadline_opt) ropt.deadline = deadline;
      return cmd_rescale(ropt, out);
    }
    if (*fit_cmd) return cmd_fit(fit_path, out, err);
    if (*derive_cmd) return cmd_derive(derive_path, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EmptyWindowError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PinchError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    // anything else stems from unusable input data
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitConfig;
}

} // namespace axiflow
