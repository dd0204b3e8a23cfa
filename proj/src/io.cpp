#include "axiflow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace axiflow {

namespace fs = std::filesystem;

nlohmann::json profile_to_json(const RadiusProfile& profile, double t) {
  nlohmann::json j;
  j["a"] = profile.interval().a;
  j["b"] = profile.interval().b;
  j["n_cells"] = profile.n_cells();
  j["rho"] = std::vector<double>(profile.rho().begin(), profile.rho().end());
  j["t"] = t;
  return j;
}

Snapshot profile_from_json(const nlohmann::json& j, long step) {
  try {
    const auto rho = j.at("rho").get<std::vector<double>>();
    const int n_cells = j.at("n_cells").get<int>();
    if (static_cast<std::size_t>(n_cells) + 1 != rho.size()) {
      throw IoError("profile: n_cells = " + std::to_string(n_cells) + " but rho has " +
                    std::to_string(rho.size()) + " entries");
    }
    const double t = j.contains("t") ? j.at("t").get<double>() : 0.0;
    return Snapshot{step, t,
                    RadiusProfile(AxisInterval(j.at("a").get<double>(), j.at("b").get<double>()),
                                  rho)};
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("profile: malformed snapshot JSON: ") + e.what());
  }
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::string snapshot_file_name(long step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%08ld.json", step);
  return buf;
}

void write_step_log(std::ostream& out, const std::vector<StepRecord>& log) {
  out << kStepLogHeader << '\n';
  char buf[512];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.t, r.dt, r.h, r.max_A, r.max_H, r.min_rho, r.max_vy, r.max_k_over_p, r.volume);
    out << buf;
  }
}

std::vector<StepRecord> read_step_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kStepLogHeader) {
    throw IoError("step log: missing or unexpected header");
  }
  std::vector<StepRecord> log;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double v[9];
    const char* p = line.c_str();
    for (int i = 0; i < 9; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p || (i < 8 && *end != ',') || (i == 8 && *end != '\0' && *end != '\r')) {
        throw IoError("step log: malformed line " + std::to_string(line_no));
      }
      p = end + 1;
    }
    log.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
  }
  return log;
}

void write_trajectory(const fs::path& dir, const FlowTrajectory& traj, nlohmann::json manifest) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  // stale snapshots from an earlier run into the same directory
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0 && entry.path().extension() == ".json") {
      fs::remove(entry.path());
    }
  }

  std::vector<std::string> names;
  for (const auto& snap : traj.snapshots) {
    names.push_back(snapshot_file_name(snap.step));
    write_json_file(dir / names.back(), profile_to_json(snap.profile, snap.t));
  }
  {
    std::ofstream out(dir / "step_log.csv");
    if (!out) throw IoError("cannot write " + (dir / "step_log.csv").string());
    write_step_log(out, traj.step_log);
  }
  manifest["kind"] = std::string(to_string(traj.kind));
  manifest["termination"] = std::string(to_string(traj.termination));
  manifest["snapshots"] = names;
  write_json_file(dir / "manifest.json", manifest);
}

FlowTrajectory read_trajectory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  const auto manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw IoError("no manifest.json in " + dir.string());
  const auto manifest = read_json_file(manifest_path);

  FlowTrajectory traj;
  try {
    traj.kind = flow_kind_from_string(manifest.at("kind").get<std::string>());
    traj.termination = termination_from_string(manifest.at("termination").get<std::string>());
  } catch (const std::exception& e) {
    throw IoError(std::string("manifest: ") + e.what());
  }

  {
    std::ifstream in(dir / "step_log.csv");
    if (!in) throw IoError("no step_log.csv in " + dir.string());
    traj.step_log = read_step_log(in);
  }
  if (traj.step_log.empty()) throw IoError("empty step log in " + dir.string());

  std::vector<std::pair<long, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("snapshot_", 0) != 0 || entry.path().extension() != ".json") continue;
    const auto digits = name.substr(9, name.size() - 9 - 5);
    char* end = nullptr;
    const long step = std::strtol(digits.c_str(), &end, 10);
    if (digits.empty() || *end != '\0') throw IoError("unexpected snapshot file " + name);
    files.emplace_back(step, entry.path());
  }
  if (files.empty()) throw IoError("no snapshots in " + dir.string());
  std::sort(files.begin(), files.end());
  for (const auto& [step, path] : files) {
    try {
      traj.snapshots.push_back(profile_from_json(read_json_file(path), step));
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return traj;
}

} // namespace axiflow
