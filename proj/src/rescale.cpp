#include "axiflow/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace axiflow {

RescaleEvent max_curvature_event(const FlowTrajectory& traj, double deadline) {
  std::optional<RescaleEvent> best;
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const auto& snap = traj.snapshots[s];
    if (snap.t > deadline) continue;
    const auto state = geometric_state(snap.profile);
    // leftmost maximiser within this snapshot
    std::size_t arg = 0;
    for (std::size_t j = 1; j < state.size(); ++j) {
      if (state.A2[j] > state.A2[arg]) arg = j;
    }
    const double alpha = std::sqrt(state.A2[arg]);
    // later snapshots win ties
    if (!best || alpha >= best->alpha) {
      best = RescaleEvent{alpha, snap.t, arg, snap.profile.x(arg), s};
    }
  }
  if (!best) {
    throw EmptyWindowError("max_curvature_event: no snapshot at or before t = " +
                           std::to_string(deadline));
  }
  return *best;
}

double RescaledProfile::max_A_tilde() const {
  return *std::max_element(A_tilde.begin(), A_tilde.end());
}

RadiusProfile RescaledProfile::as_profile() const {
  return RadiusProfile(AxisInterval(x_tilde.front(), x_tilde.back()), rho_tilde);
}

RescaledProfile rescale(const Snapshot& snapshot, const RescaleEvent& event, FlowKind kind) {
  if (!(event.alpha > 0.0)) throw std::invalid_argument("rescale: alpha must be positive");
  const auto& profile = snapshot.profile;
  const auto state = geometric_state(profile);
  const double alpha = event.alpha;

  RescaledProfile rp;
  rp.alpha = alpha;
  rp.t = snapshot.t;
  rp.tau = alpha * alpha * (snapshot.t - event.t_i);
  const std::size_t n = profile.n_nodes();
  rp.x_tilde.resize(n);
  rp.rho_tilde.resize(n);
  rp.H_tilde.resize(n);
  rp.A_tilde.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    rp.x_tilde[j] = alpha * (profile.x(j) - event.x1_i);
    rp.rho_tilde[j] = alpha * profile.rho(j);
    rp.H_tilde[j] = state.H[j] / alpha;
    rp.A_tilde[j] = std::sqrt(state.A2[j]) / alpha;
  }
  if (kind == FlowKind::VolumePreserving) {
    rp.h_tilde = average_mean_curvature(state, profile.dx()) / alpha;
  }
  return rp;
}

double c5_from_c0(double c0) { return std::sqrt(1.0 + c0 * c0); }

CheckRecord check_rescaled_height_bound(const RescaledProfile& rp, double c5,
                                        double relative_slack) {
  CheckRecord rec;
  rec.name = "rescaled_height_bound";
  rec.at_time = rp.t;
  rec.tolerance = relative_slack * c5;
  rec.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < rp.size(); ++j) {
    rec.worst_violation = std::max(rec.worst_violation, rp.A_tilde[j] * rp.rho_tilde[j] - c5);
  }
  rec.passed = rec.worst_violation <= rec.tolerance;
  rec.constants = {{"c5", c5}};
  return rec;
}

namespace {

constexpr double kCMin = 1e-3;
constexpr double kCMax = 1e3;
constexpr double kInf = std::numeric_limits<double>::infinity();

double fit_cost(std::span<const double> x, std::span<const double> rho, double c, double x0) {
  double cost = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double u = (x[j] - x0) / c;
    if (std::abs(u) > 700.0) return kInf;
    const double r = c * std::cosh(u) - rho[j];
    cost += r * r;
  }
  return cost;
}

} // namespace

CatenoidFit catenoid_fit(std::span<const double> x, std::span<const double> rho) {
  if (x.size() != rho.size()) throw std::invalid_argument("catenoid_fit: size mismatch");
  if (x.size() < 8) throw std::invalid_argument("catenoid_fit: need at least 8 samples");
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double xmin = *xmin_it;
  const double xmax = *xmax_it;

  // coarse search
  constexpr int kGridC = 120;
  constexpr int kGridX = 40;
  double c = 1.0;
  double x0 = 0.5 * (xmin + xmax);
  double cost = kInf;
  for (int i = 0; i <= kGridC; ++i) {
    const double ci = std::pow(10.0, -3.0 + 6.0 * i / kGridC);
    for (int k = 0; k <= kGridX; ++k) {
      const double xk = xmin + (xmax - xmin) * k / kGridX;
      const double ck = fit_cost(x, rho, ci, xk);
      if (ck < cost) {
        cost = ck;
        c = ci;
        x0 = xk;
      }
    }
  }
  if (!std::isfinite(cost)) throw FitDivergedError("catenoid_fit: no finite start in the box");

  // Levenberg-Marquardt on (c, x0)
  CatenoidFit fit;
  double lambda = 1e-3;
  for (int iter = 0; iter < 500 && cost > 0.0; ++iter) {
    fit.iterations = iter + 1;
    double jcc = 0.0, jcx = 0.0, jxx = 0.0, gc = 0.0, gx = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double u = (x[j] - x0) / c;
      const double ch = std::cosh(u);
      const double sh = std::sinh(u);
      const double r = c * ch - rho[j];
      const double dc = ch - u * sh;
      const double dx0 = -sh;
      jcc += dc * dc;
      jcx += dc * dx0;
      jxx += dx0 * dx0;
      gc += dc * r;
      gx += dx0 * r;
    }

    bool accepted = false;
    double step_c = 0.0, step_x = 0.0;
    while (lambda < 1e16) {
      const double a11 = jcc * (1.0 + lambda);
      const double a22 = jxx * (1.0 + lambda);
      const double det = a11 * a22 - jcx * jcx;
      if (det > 0.0) {
        step_c = (-gc * a22 + gx * jcx) / det;
        step_x = (-gx * a11 + gc * jcx) / det;
        const double c_try = c + step_c;
        if (c_try > 0.0) {
          const double cost_try = fit_cost(x, rho, c_try, x0 + step_x);
          if (cost_try < cost) {
            c = c_try;
            x0 += step_x;
            cost = cost_try;
            lambda = std::max(lambda / 3.0, 1e-12);
            accepted = true;
            break;
          }
        }
      }
      lambda *= 4.0;
    }
    if (!accepted) break;
    if (c < kCMin || c > kCMax || x0 < xmin || x0 > xmax) {
      throw FitDivergedError("catenoid_fit: refinement left the search box (c = " +
                             std::to_string(c) + ", x0 = " + std::to_string(x0) + ")");
    }
    if (std::abs(step_c) <= 1e-15 * c && std::abs(step_x) <= 1e-15 * (1.0 + std::abs(x0))) break;
  }

  fit.c5 = c;
  fit.x0 = x0;
  fit.rms_residual = std::sqrt(cost / static_cast<double>(x.size()));
  return fit;
}

CatenoidFit catenoid_fit(const RescaledProfile& rp) { return catenoid_fit(rp.x_tilde, rp.rho_tilde); }

ContradictionDiagnostic contradiction_diagnostic(const CatenoidFit& fit, double c4, double alpha,
                                                 double eps1, double eps2) {
  if (!(fit.c5 > 0.0) || !(alpha > 0.0)) {
    throw std::invalid_argument("contradiction_diagnostic: c5 and alpha must be positive");
  }
  ContradictionDiagnostic d;
  d.log_argument = 4.0 * alpha / fit.c5 * (c4 + eps1 / alpha) - 1.0;
  if (d.log_argument > 1.0) d.half_width = 2.0 * fit.c5 * std::log(d.log_argument) + eps2;
  return d;
}

double catenoid_vy_proxy(double c5, double alpha, double x, double eps1) {
  return c5 / (4.0 * alpha) * (std::exp(x / (2.0 * c5)) + 1.0) - eps1 / alpha;
}

} // namespace axiflow
