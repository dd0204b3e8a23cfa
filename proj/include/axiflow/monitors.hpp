#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "axiflow/flow.hpp"

namespace axiflow {

class WrongKindError : public std::runtime_error {
public:
  explicit WrongKindError(const std::string& what) : std::runtime_error(what) {}
};

class HNotBoundedError : public std::runtime_error {
public:
  explicit HNotBoundedError(const std::string& what) : std::runtime_error(what) {}
};

class InsufficientSnapshotsError : public std::runtime_error {
public:
  explicit InsufficientSnapshotsError(const std::string& what) : std::runtime_error(what) {}
};

// passed == (worst_violation <= tolerance). worst_violation is the largest
// excess of the monitored quantity over its bound, so negative values mean
// the bound held with room to spare.
struct CheckRecord {
  std::string name;
  double worst_violation{0.0};
  double at_time{0.0};
  bool passed{true};
  double tolerance{0.0};
  std::map<std::string, double> constants;
};

struct MonitorOptions {
  double relative_slack{1e-6};
  double growth_min{10.0};
};

// c2 = min h, c3 = max h over the log. Volume-preserving runs only.
CheckRecord check_h_bounds(const FlowTrajectory& traj);

// The vy bound constant: max_0 vy for MCF, max_0 vy + c3 T for volume flow.
double vy_bound_constant(const FlowTrajectory& traj);

CheckRecord check_vy(const FlowTrajectory& traj, const MonitorOptions& options = {});
CheckRecord check_k_over_p(const FlowTrajectory& traj, const MonitorOptions& options = {});

// Audits |k|/p <= 1 + C c4 over all snapshots; C must dominate the logged max |H|.
CheckRecord check_abs_k_over_p(const FlowTrajectory& traj, double C,
                               const MonitorOptions& options = {});

enum class Quantity { y, v, k, p, H };

std::string_view to_string(Quantity q);

struct ResidualRow {
  Quantity quantity{Quantity::y};
  double t{0.0};
  double max_residual{0.0};
  std::size_t node{0};
};

struct ResidualTable {
  std::vector<ResidualRow> rows;

  // Largest residual recorded for q over all snapshot triples.
  double max(Quantity q) const;
};

// Compares the material time derivative of each selected quantity, taken by
// three-point differencing across consecutive snapshots and corrected for the
// tangential drift of fixed grid nodes, against the right-hand side of its
// evolution equation. The nonlocal h enters only for volume-preserving runs.
ResidualTable evolution_residuals(const FlowTrajectory& traj, const std::set<Quantity>& which);

struct ExtensionVerdict {
  bool singular{false};          // terminated by blow-up or pinch
  double h_growth{1.0};          // max logged |H| over its initial value
  bool theorem_violation{false}; // |A| blew up while |H| stayed bounded
  bool passed{true};
};

ExtensionVerdict extension_criterion(const FlowTrajectory& traj, double growth_min = 10.0);

struct MonitorReport {
  std::vector<CheckRecord> checks;
  double c0{0.0};
  double c1{0.0};
  double c2{0.0};
  double c3{0.0};
  double c4{0.0};
  double C{0.0}; // max logged |H|, the bound fed to the |k|/p audit

  bool all_passed() const;
};

// Runs every check applicable to the trajectory's flow kind.
MonitorReport build_report(const FlowTrajectory& traj, const MonitorOptions& options = {});

} // namespace axiflow
