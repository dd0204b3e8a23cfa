#include "axiflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace axiflow {

std::string_view to_string(FlowKind kind) {
  switch (kind) {
  case FlowKind::MeanCurvature: return "MeanCurvature";
  case FlowKind::VolumePreserving: return "VolumePreserving";
  }
  return "?";
}

FlowKind flow_kind_from_string(std::string_view name) {
  if (name == "mcf" || name == "MeanCurvature") return FlowKind::MeanCurvature;
  if (name == "volume" || name == "vpmcf" || name == "VolumePreserving") {
    return FlowKind::VolumePreserving;
  }
  throw std::invalid_argument("unknown flow kind '" + std::string(name) + "'");
}

std::string_view to_string(Termination termination) {
  switch (termination) {
  case Termination::ReachedTEnd: return "ReachedTEnd";
  case Termination::BlowupDetected: return "BlowupDetected";
  case Termination::PinchDetected: return "PinchDetected";
  case Termination::DtUnderflow: return "DtUnderflow";
  }
  return "?";
}

Termination termination_from_string(std::string_view name) {
  for (auto t : {Termination::ReachedTEnd, Termination::BlowupDetected,
                 Termination::PinchDetected, Termination::DtUnderflow}) {
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown termination '" + std::string(name) + "'");
}

double FlowConfig::blowup_threshold(const AxisInterval& interval) const {
  if (blowup_A2 > 0.0) return blowup_A2;
  return 1e8 / (interval.length() * interval.length());
}

double average_mean_curvature(const GeometricState& state, double dx) {
  const std::size_t n = state.size();
  std::vector<double> weighted(n);
  std::vector<double> area(n);
  for (std::size_t j = 0; j < n; ++j) {
    area[j] = 2.0 * std::numbers::pi * state.y[j] * state.v[j];
    weighted[j] = state.H[j] * area[j];
  }
  return trapezoid(weighted, dx) / trapezoid(area, dx);
}

double average_mean_curvature(const RadiusProfile& profile) {
  return average_mean_curvature(geometric_state(profile), profile.dx());
}

namespace {

std::vector<double> rhs_with_mean(const RadiusProfile& profile, FlowKind kind, double h) {
  const auto rho = profile.rho();
  const auto d = derivatives(profile);
  std::vector<double> speed(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double slope2 = 1.0 + d.d1[j] * d.d1[j];
    speed[j] = d.d2[j] / slope2 - 1.0 / rho[j];
    if (kind == FlowKind::VolumePreserving) speed[j] += h * std::sqrt(slope2);
  }
  return speed;
}

double mean_for(const RadiusProfile& profile, FlowKind kind) {
  return kind == FlowKind::VolumePreserving ? average_mean_curvature(profile) : 0.0;
}

// Forward Euler with compensated accumulation: carry holds the low-order
// bits lost when each increment was added, so rounding does not drift over
// many small steps. The carry is only committed when the step is accepted.
std::optional<RadiusProfile> compensated_step(const RadiusProfile& profile, FlowKind kind,
                                              double dt, std::vector<double>& carry) {
  const auto speed = rhs_with_mean(profile, kind, mean_for(profile, kind));
  const auto rho = profile.rho();
  std::vector<double> next(rho.size());
  std::vector<double> next_carry(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double inc = dt * speed[j] - carry[j];
    next[j] = rho[j] + inc;
    next_carry[j] = (next[j] - rho[j]) - inc;
    if (!(next[j] > 0.0)) return std::nullopt;
  }
  carry = std::move(next_carry);
  return RadiusProfile(profile.interval(), std::move(next));
}

} // namespace

std::vector<double> rhs(const RadiusProfile& profile, FlowKind kind) {
  return rhs_with_mean(profile, kind, mean_for(profile, kind));
}

std::optional<RadiusProfile> try_step(const RadiusProfile& profile, FlowKind kind, double dt) {
  const auto speed = rhs(profile, kind);
  const auto rho = profile.rho();
  std::vector<double> next(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    next[j] = rho[j] + dt * speed[j];
    if (!(next[j] > 0.0)) return std::nullopt;
  }
  return RadiusProfile(profile.interval(), std::move(next));
}

RadiusProfile step(const RadiusProfile& profile, FlowKind kind, double dt) {
  auto next = try_step(profile, kind, dt);
  if (!next) throw StepRejected("step: radius would cross the axis, reduce dt");
  return *std::move(next);
}

double stable_dt(const RadiusProfile& profile, const GeometricState& state,
                 const FlowConfig& config) {
  const double dx = profile.dx();
  const double max_A2 = *std::max_element(state.A2.begin(), state.A2.end());
  return std::min({config.dt_init, config.cfl * dx * dx, config.cfl / max_A2});
}

StepRecord make_step_record(double t, double dt, const RadiusProfile& profile,
                            const GeometricState& state) {
  StepRecord r;
  r.t = t;
  r.dt = dt;
  r.h = average_mean_curvature(state, profile.dx());
  r.min_rho = profile.min_rho();
  r.volume = state.enclosed_volume;
  r.max_k_over_p = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < state.size(); ++j) {
    r.max_A = std::max(r.max_A, std::sqrt(state.A2[j]));
    r.max_H = std::max(r.max_H, std::abs(state.H[j]));
    r.max_vy = std::max(r.max_vy, state.v[j] * state.y[j]);
    r.max_k_over_p = std::max(r.max_k_over_p, state.k[j] / state.p[j]);
  }
  return r;
}

FlowTrajectory run(const RadiusProfile& initial, const FlowConfig& config,
                   const StateObserver& observer) {
  if (!(config.t_end > 0.0)) throw std::invalid_argument("run: t_end must be positive");
  if (!(config.dt_init > 0.0)) throw std::invalid_argument("run: dt_init must be positive");
  if (!(config.cfl > 0.0 && config.cfl <= 1.0)) {
    throw std::invalid_argument("run: cfl must lie in (0, 1]");
  }
  if (config.snapshot_every < 1) throw std::invalid_argument("run: snapshot_every must be >= 1");
  if (config.n_cells != initial.n_cells()) {
    throw std::invalid_argument("run: config n_cells does not match the initial profile");
  }

  const double blowup = config.blowup_threshold(initial.interval());
  const double pinch_radius = 1e-6 * initial.interval().length();
  const double dt_floor = 1e-14 * config.dt_init;

  FlowTrajectory traj;
  traj.kind = config.kind;

  RadiusProfile profile = initial;
  GeometricState state = geometric_state(profile);
  if (observer) observer(state);
  if (!(*std::max_element(state.A2.begin(), state.A2.end()) < blowup)) {
    throw std::invalid_argument("run: blowup_A2 must exceed the initial max |A|^2");
  }

  double t = 0.0;
  long n_steps = 0;
  std::vector<double> carry(profile.n_nodes(), 0.0);
  traj.step_log.push_back(make_step_record(t, 0.0, profile, state));
  traj.snapshots.push_back({0, t, profile});

  for (;;) {
    if (*std::max_element(state.A2.begin(), state.A2.end()) >= blowup) {
      traj.termination = Termination::BlowupDetected;
      break;
    }
    if (profile.min_rho() <= pinch_radius) {
      traj.termination = Termination::PinchDetected;
      break;
    }
    if (t >= config.t_end) {
      traj.termination = Termination::ReachedTEnd;
      break;
    }

    double dt = stable_dt(profile, state, config);
    bool last = false;
    const double remaining = config.t_end - t;
    if (remaining <= dt * (1.0 + 1e-9)) {
      dt = remaining;
      last = true;
    } else if (dt < dt_floor) {
      traj.termination = Termination::DtUnderflow;
      break;
    }

    std::optional<RadiusProfile> next = compensated_step(profile, config.kind, dt, carry);
    while (!next && dt >= dt_floor) {
      dt *= 0.5;
      last = false;
      next = compensated_step(profile, config.kind, dt, carry);
    }
    if (!next) {
      traj.termination = Termination::PinchDetected;
      break;
    }

    profile = *std::move(next);
    t = last ? config.t_end : t + dt;
    ++n_steps;
    state = geometric_state(profile);
    if (observer) observer(state);
    traj.step_log.push_back(make_step_record(t, dt, profile, state));
    if (n_steps % config.snapshot_every == 0) traj.snapshots.push_back({n_steps, t, profile});
  }

  if (traj.snapshots.back().step != n_steps) traj.snapshots.push_back({n_steps, t, profile});
  return traj;
}

} // namespace axiflow
