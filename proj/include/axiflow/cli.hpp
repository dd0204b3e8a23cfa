#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "axiflow/flow.hpp"
#include "axiflow/monitors.hpp"
#include "axiflow/scenario.hpp"

namespace axiflow {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitIo = 3 };

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  Scenario scenario;
  FlowConfig flow;
  std::string output_dir;

  // Accepts a flat config object or a manifest written by `run` (whose
  // "config" member is used). Unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

nlohmann::json to_json(const CheckRecord& rec);

// A fit is called poor when its RMS residual exceeds this fraction of the
// mean sampled radius.
inline constexpr double kPoorFitRelativeRms = 1e-3;

// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace axiflow
