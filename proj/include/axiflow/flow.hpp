#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axiflow/profile.hpp"

namespace axiflow {

enum class FlowKind { MeanCurvature, VolumePreserving };

std::string_view to_string(FlowKind kind);
FlowKind flow_kind_from_string(std::string_view name); // accepts "mcf"/"volume" and the enum names

struct FlowConfig {
  FlowKind kind{FlowKind::MeanCurvature};
  double t_end{1.0};
  double dt_init{1e-3};    // largest step ever taken; also the reference for dt underflow
  double cfl{0.25};        // fraction of the explicit stability limit
  double blowup_A2{0.0};   // <= 0 means the default 1e8 / (b - a)^2
  int snapshot_every{100};
  int n_cells{128};

  double blowup_threshold(const AxisInterval& interval) const;
};

enum class Termination { ReachedTEnd, BlowupDetected, PinchDetected, DtUnderflow };

std::string_view to_string(Termination termination);
Termination termination_from_string(std::string_view name);

// One row of the step log. The first row describes the initial state (dt = 0).
struct StepRecord {
  double t{0.0};
  double dt{0.0};
  double h{0.0};
  double max_A{0.0};
  double max_H{0.0};
  double min_rho{0.0};
  double max_vy{0.0};
  double max_k_over_p{0.0};
  double volume{0.0};
};

struct Snapshot {
  long step{0};
  double t{0.0};
  RadiusProfile profile;
};

struct FlowTrajectory {
  FlowKind kind{FlowKind::MeanCurvature};
  std::vector<Snapshot> snapshots;
  std::vector<StepRecord> step_log;
  Termination termination{Termination::ReachedTEnd};
};

// Area-weighted mean of H (trapezoid rule on the area element 2 pi rho v dx).
double average_mean_curvature(const GeometricState& state, double dx);
double average_mean_curvature(const RadiusProfile& profile);

// Radial speed rho_t at each node:
//   MeanCurvature     rho'' / (1 + rho'^2) - 1/rho
//   VolumePreserving  rho'' / (1 + rho'^2) - 1/rho + h sqrt(1 + rho'^2)
std::vector<double> rhs(const RadiusProfile& profile, FlowKind kind);

class StepRejected : public std::runtime_error {
public:
  explicit StepRejected(const std::string& what) : std::runtime_error(what) {}
};

// Forward Euler update. The nonlocal h is frozen at the pre-step state.
// Returns nullopt when any updated radius is not positive.
std::optional<RadiusProfile> try_step(const RadiusProfile& profile, FlowKind kind, double dt);
// Same as try_step but throws StepRejected.
RadiusProfile step(const RadiusProfile& profile, FlowKind kind, double dt);

// Largest step the run loop takes from this state:
// min(dt_init, cfl dx^2, cfl / max|A|^2).
double stable_dt(const RadiusProfile& profile, const GeometricState& state,
                 const FlowConfig& config);

StepRecord make_step_record(double t, double dt, const RadiusProfile& profile,
                            const GeometricState& state);

// Invoked on every geometric state the run loop evaluates.
using StateObserver = std::function<void(const GeometricState&)>;

FlowTrajectory run(const RadiusProfile& initial, const FlowConfig& config,
                   const StateObserver& observer = {});

} // namespace axiflow
