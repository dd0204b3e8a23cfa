#include "axiflow/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace axiflow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_log(const FlowTrajectory& traj) {
  if (traj.step_log.empty()) throw std::invalid_argument("monitor: empty step log");
}

double max_logged_h(const FlowTrajectory& traj) {
  double c3 = kNegInf;
  for (const auto& r : traj.step_log) c3 = std::max(c3, r.h);
  return c3;
}

} // namespace

CheckRecord check_h_bounds(const FlowTrajectory& traj) {
  if (traj.kind != FlowKind::VolumePreserving) {
    throw WrongKindError("check_h_bounds: only defined for volume-preserving runs");
  }
  require_log(traj);
  CheckRecord rec;
  rec.name = "h_bounds";
  double c2 = std::numeric_limits<double>::infinity();
  double c3 = kNegInf;
  for (const auto& r : traj.step_log) {
    if (r.h < c2) {
      c2 = r.h;
      rec.at_time = r.t;
    }
    c3 = std::max(c3, r.h);
  }
  // h must stay strictly positive
  rec.worst_violation = -c2;
  rec.tolerance = -std::numeric_limits<double>::min();
  rec.passed = rec.worst_violation <= rec.tolerance;
  rec.constants = {{"c2", c2}, {"c3", c3}};
  return rec;
}

double vy_bound_constant(const FlowTrajectory& traj) {
  require_log(traj);
  const double initial = traj.step_log.front().max_vy;
  if (traj.kind == FlowKind::MeanCurvature) return initial;
  return initial + max_logged_h(traj) * traj.step_log.back().t;
}

CheckRecord check_vy(const FlowTrajectory& traj, const MonitorOptions& options) {
  require_log(traj);
  CheckRecord rec;
  rec.name = "vy_bound";
  const double initial = traj.step_log.front().max_vy;
  const double c3 = traj.kind == FlowKind::VolumePreserving ? max_logged_h(traj) : 0.0;
  rec.tolerance = options.relative_slack * initial;
  rec.worst_violation = kNegInf;
  for (const auto& r : traj.step_log) {
    const double excess = r.max_vy - (initial + c3 * r.t);
    if (excess > rec.worst_violation) {
      rec.worst_violation = excess;
      rec.at_time = r.t;
    }
  }
  rec.passed = rec.worst_violation <= rec.tolerance;
  rec.constants = {{"max0_vy", initial}, {"c4", vy_bound_constant(traj)}};
  if (traj.kind == FlowKind::VolumePreserving) rec.constants["c3"] = c3;
  return rec;
}

CheckRecord check_k_over_p(const FlowTrajectory& traj, const MonitorOptions& options) {
  require_log(traj);
  CheckRecord rec;
  rec.name = "k_over_p_bound";
  const double c1 = std::max(1.0, traj.step_log.front().max_k_over_p);
  rec.tolerance = options.relative_slack * c1;
  rec.worst_violation = kNegInf;
  for (const auto& r : traj.step_log) {
    const double excess = r.max_k_over_p - c1;
    if (excess > rec.worst_violation) {
      rec.worst_violation = excess;
      rec.at_time = r.t;
    }
  }
  rec.passed = rec.worst_violation <= rec.tolerance;
  rec.constants = {{"c1", c1}};
  return rec;
}

CheckRecord check_abs_k_over_p(const FlowTrajectory& traj, double C,
                               const MonitorOptions& options) {
  require_log(traj);
  for (const auto& r : traj.step_log) {
    if (r.max_H > C) {
      throw HNotBoundedError("check_abs_k_over_p: logged max|H| " + std::to_string(r.max_H) +
                             " exceeds C = " + std::to_string(C));
    }
  }
  const double c4 = vy_bound_constant(traj);
  const double c0 = 1.0 + C * c4;
  CheckRecord rec;
  rec.name = "abs_k_over_p_bound";
  rec.tolerance = options.relative_slack * c0;
  rec.worst_violation = kNegInf;
  for (const auto& snap : traj.snapshots) {
    const auto s = geometric_state(snap.profile);
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double excess = std::abs(s.k[j]) / s.p[j] - c0;
      if (excess > rec.worst_violation) {
        rec.worst_violation = excess;
        rec.at_time = snap.t;
      }
    }
  }
  rec.passed = rec.worst_violation <= rec.tolerance;
  rec.constants = {{"C", C}, {"c4", c4}, {"c0", c0}};
  return rec;
}

std::string_view to_string(Quantity q) {
  switch (q) {
  case Quantity::y: return "y";
  case Quantity::v: return "v";
  case Quantity::k: return "k";
  case Quantity::p: return "p";
  case Quantity::H: return "H";
  }
  return "?";
}

double ResidualTable::max(Quantity q) const {
  double m = 0.0;
  for (const auto& r : rows) {
    if (r.quantity == q) m = std::max(m, r.max_residual);
  }
  return m;
}

namespace {

const std::vector<double>& field(const GeometricState& s, Quantity q) {
  switch (q) {
  case Quantity::y: return s.y;
  case Quantity::v: return s.v;
  case Quantity::k: return s.k;
  case Quantity::p: return s.p;
  case Quantity::H: return s.H;
  }
  return s.y;
}

} // namespace

ResidualTable evolution_residuals(const FlowTrajectory& traj, const std::set<Quantity>& which) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 3) {
    throw InsufficientSnapshotsError("evolution_residuals: need at least 3 snapshots, got " +
                                     std::to_string(snaps.size()));
  }
  const bool volume = traj.kind == FlowKind::VolumePreserving;

  ResidualTable table;
  for (std::size_t i = 1; i + 1 < snaps.size(); ++i) {
    const auto& prev = snaps[i - 1];
    const auto& mid = snaps[i];
    const auto& next = snaps[i + 1];
    const std::size_t n = mid.profile.n_nodes();
    if (prev.profile.n_nodes() != n || next.profile.n_nodes() != n) {
      throw std::invalid_argument("evolution_residuals: snapshots on different grids");
    }

    // three-point derivative weights on a possibly non-uniform time stencil
    const double h1 = mid.t - prev.t;
    const double h2 = next.t - mid.t;
    const double w0 = -h2 / (h1 * (h1 + h2));
    const double w1 = (h2 - h1) / (h1 * h2);
    const double w2 = h1 / (h2 * (h1 + h2));
    auto time_derivative = [&](std::span<const double> f0, std::span<const double> f1,
                               std::span<const double> f2, std::size_t j) {
      return w0 * f0[j] + w1 * f1[j] + w2 * f2[j];
    };

    const auto s0 = geometric_state(prev.profile);
    const auto s1 = geometric_state(mid.profile);
    const auto s2 = geometric_state(next.profile);
    const double dx = mid.profile.dx();
    const double h = volume ? average_mean_curvature(s1, dx) : 0.0;
    const auto rho_d = derivatives(mid.profile);

    // axial velocity of the material point currently above node j
    std::vector<double> drift(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double rho_t = time_derivative(prev.profile.rho(), mid.profile.rho(),
                                           next.profile.rho(), j);
      drift[j] = -rho_t * rho_d.d1[j] / (1.0 + rho_d.d1[j] * rho_d.d1[j]);
    }

    for (Quantity q : which) {
      const auto& f1 = field(s1, q);
      const auto fd = derivatives(f1, dx);
      const auto lap = surface_laplacian(mid.profile, f1);

      ResidualRow row{q, mid.t, 0.0, 0};
      for (std::size_t j = 0; j < n; ++j) {
        const double lhs = time_derivative(field(s0, q), f1, field(s2, q), j) + drift[j] * fd.d1[j];
        const double y = s1.y[j], v = s1.v[j], k = s1.k[j], p = s1.p[j];
        const double H = s1.H[j], A2 = s1.A2[j], q2 = s1.q[j] * s1.q[j];
        double rhs_value = lap[j];
        switch (q) {
        case Quantity::y: rhs_value += -1.0 / y + h * p * y; break;
        case Quantity::v: {
          const double grad_v2 = fd.d1[j] * fd.d1[j] / (v * v);
          rhs_value += -A2 * v + v / (y * y) - 2.0 / v * grad_v2;
          break;
        }
        case Quantity::k: rhs_value += A2 * k - 2.0 * q2 * (k - p) - h * k * k; break;
        case Quantity::p: rhs_value += A2 * p + 2.0 * q2 * (k - p) - h * p * p; break;
        case Quantity::H: rhs_value += (H - h) * A2; break;
        }
        const double r = std::abs(lhs - rhs_value);
        if (r > row.max_residual) {
          row.max_residual = r;
          row.node = j;
        }
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

ExtensionVerdict extension_criterion(const FlowTrajectory& traj, double growth_min) {
  require_log(traj);
  ExtensionVerdict verdict;
  verdict.singular = traj.termination == Termination::BlowupDetected ||
                     traj.termination == Termination::PinchDetected;
  const double initial = traj.step_log.front().max_H;
  double peak = initial;
  for (const auto& r : traj.step_log) peak = std::max(peak, r.max_H);
  if (initial > 0.0) {
    verdict.h_growth = peak / initial;
  } else {
    verdict.h_growth = peak > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  if (verdict.singular && verdict.h_growth < growth_min) verdict.theorem_violation = true;
  verdict.passed = !verdict.theorem_violation;
  return verdict;
}

bool MonitorReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

MonitorReport build_report(const FlowTrajectory& traj, const MonitorOptions& options) {
  require_log(traj);
  MonitorReport report;
  if (traj.kind == FlowKind::VolumePreserving) {
    auto h = check_h_bounds(traj);
    report.c2 = h.constants.at("c2");
    report.c3 = h.constants.at("c3");
    report.checks.push_back(std::move(h));
  }

  report.checks.push_back(check_vy(traj, options));
  report.c4 = vy_bound_constant(traj);

  auto kp = check_k_over_p(traj, options);
  report.c1 = kp.constants.at("c1");
  report.checks.push_back(std::move(kp));

  double C = 0.0;
  for (const auto& r : traj.step_log) C = std::max(C, r.max_H);
  report.C = C;
  auto akp = check_abs_k_over_p(traj, C, options);
  report.c0 = akp.constants.at("c0");
  report.checks.push_back(std::move(akp));

  const auto ext = extension_criterion(traj, options.growth_min);
  CheckRecord rec;
  rec.name = "extension_criterion";
  rec.worst_violation = ext.singular ? options.growth_min - ext.h_growth : 0.0;
  rec.at_time = traj.step_log.back().t;
  rec.tolerance = 0.0;
  rec.passed = ext.passed;
  rec.constants = {{"h_growth", ext.h_growth},
                   {"singular", ext.singular ? 1.0 : 0.0},
                   {"theorem_violation", ext.theorem_violation ? 1.0 : 0.0}};
  report.checks.push_back(std::move(rec));
  return report;
}

} // namespace axiflow
