#pragma once

#include <optional>
#include <span>
#include <vector>

#include "axiflow/monitors.hpp"

namespace axiflow {

class EmptyWindowError : public std::runtime_error {
public:
  explicit EmptyWindowError(const std::string& what) : std::runtime_error(what) {}
};

class FitDivergedError : public std::runtime_error {
public:
  explicit FitDivergedError(const std::string& what) : std::runtime_error(what) {}
};

// Spacetime point where |A| attains its maximum over snapshots up to a deadline.
struct RescaleEvent {
  double alpha{0.0};           // max |A|
  double t_i{0.0};             // latest time attaining it
  std::size_t node_index{0};   // leftmost node attaining it at t_i
  double x1_i{0.0};            // axis coordinate of that node
  std::size_t snapshot_index{0};
};

RescaleEvent max_curvature_event(const FlowTrajectory& traj, double deadline);

// A snapshot viewed in the blow-up frame of an event: lengths scale by alpha
// about the axis point x1_i, time by alpha^2 about t_i, curvatures by 1/alpha.
struct RescaledProfile {
  std::vector<double> x_tilde;
  std::vector<double> rho_tilde;
  double tau{0.0};
  double alpha{1.0};
  double t{0.0}; // original time of the snapshot
  std::vector<double> H_tilde;
  std::vector<double> A_tilde;
  std::optional<double> h_tilde; // volume-preserving runs only

  std::size_t size() const { return x_tilde.size(); }
  double max_A_tilde() const;
  // The rescaled curve as a profile over [x_tilde.front(), x_tilde.back()].
  RadiusProfile as_profile() const;
};

RescaledProfile rescale(const Snapshot& snapshot, const RescaleEvent& event,
                        FlowKind kind = FlowKind::MeanCurvature);

// Smallest constant with |A| <= c5 p given |k|/p <= c0.
double c5_from_c0(double c0);

// Audits |A~| rho~ <= c5 (equivalently |A| <= c5 p).
CheckRecord check_rescaled_height_bound(const RescaledProfile& rp, double c5,
                                        double relative_slack = 1e-9);

struct CatenoidFit {
  double c5{1.0}; // neck radius, rho = c5 cosh((x - x0)/c5)
  double x0{0.0};
  double rms_residual{0.0};
  int iterations{0};
};

// Least squares fit of rho ~ c cosh((x - x0)/c): log-spaced grid search over
// c in [1e-3, 1e3] and x0 across the sample range, then Levenberg-Marquardt.
// Throws FitDivergedError if the refinement leaves that box.
CatenoidFit catenoid_fit(std::span<const double> x, std::span<const double> rho);
CatenoidFit catenoid_fit(const RescaledProfile& rp);

struct ContradictionDiagnostic {
  double log_argument{0.0};
  // Rescaled axis distance past which the catenoid's vy proxy exceeds c4;
  // empty when log_argument <= 1 (no contradiction scale at this alpha).
  std::optional<double> half_width;

  bool non_positive_argument() const { return !half_width.has_value(); }
};

// x* = 2 c5 log((4 alpha / c5)(c4 + eps1/alpha) - 1) + eps2
ContradictionDiagnostic contradiction_diagnostic(const CatenoidFit& fit, double c4, double alpha,
                                                 double eps1 = 1e-3, double eps2 = 1e-3);

// (c5 / (4 alpha)) (exp(x / (2 c5)) + 1) - eps1 / alpha
double catenoid_vy_proxy(double c5, double alpha, double x, double eps1);

} // namespace axiflow
