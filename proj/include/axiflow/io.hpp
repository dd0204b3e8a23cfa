#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "axiflow/flow.hpp"

namespace axiflow {

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Snapshot schema: {"a", "b", "n_cells", "rho", "t"}. Doubles are written in
// shortest round-trip form, so reading a written file restores every bit.
nlohmann::json profile_to_json(const RadiusProfile& profile, double t);
Snapshot profile_from_json(const nlohmann::json& j, long step = 0);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

std::string snapshot_file_name(long step);

inline constexpr const char* kStepLogHeader = "t,dt,h,maxA,maxH,minRho,maxVY,maxKoverP,volume";

void write_step_log(std::ostream& out, const std::vector<StepRecord>& log);
std::vector<StepRecord> read_step_log(std::istream& in);

// Trajectory directory: manifest.json, step_log.csv and one
// snapshot_<step>.json per snapshot. The manifest carries at least
// "kind" and "termination"; callers may add to it.
void write_trajectory(const std::filesystem::path& dir, const FlowTrajectory& traj,
                      nlohmann::json manifest);
FlowTrajectory read_trajectory(const std::filesystem::path& dir);

} // namespace axiflow
