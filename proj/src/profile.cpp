#include "axiflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace axiflow {

AxisInterval::AxisInterval(double a_in, double b_in) : a(a_in), b(b_in) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
    throw std::invalid_argument("AxisInterval: require finite a < b");
  }
}

RadiusProfile::RadiusProfile(AxisInterval interval, std::vector<double> rho)
    : interval_(interval), rho_(std::move(rho)) {
  if (!(interval_.a < interval_.b)) {
    throw std::invalid_argument("RadiusProfile: require a < b");
  }
  if (rho_.size() < static_cast<std::size_t>(kMinCells) + 1) {
    throw std::invalid_argument("RadiusProfile: need at least " + std::to_string(kMinCells) +
                                " cells, got " + std::to_string(static_cast<long>(rho_.size()) - 1));
  }
  for (std::size_t j = 0; j < rho_.size(); ++j) {
    if (!std::isfinite(rho_[j])) {
      throw std::invalid_argument("RadiusProfile: non-finite radius at node " + std::to_string(j));
    }
    if (rho_[j] <= 0.0) {
      throw PinchError("RadiusProfile: radius " + std::to_string(rho_[j]) + " at node " +
                       std::to_string(j) + " touches the axis");
    }
  }
}

std::vector<double> RadiusProfile::nodes() const {
  std::vector<double> xs(rho_.size());
  for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = x(j);
  return xs;
}

double RadiusProfile::min_rho() const { return *std::min_element(rho_.begin(), rho_.end()); }

Derivatives derivatives(std::span<const double> values, double dx) {
  const std::size_t n = values.size();
  if (n < 3) throw std::invalid_argument("derivatives: need at least 3 nodes");
  Derivatives d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const double inv2dx = 1.0 / (2.0 * dx);
  const double invdx2 = 1.0 / (dx * dx);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    d.d1[j] = (values[j + 1] - values[j - 1]) * inv2dx;
    d.d2[j] = (values[j + 1] - 2.0 * values[j] + values[j - 1]) * invdx2;
  }
  // ghost nodes: f[-1] = f[1], f[n] = f[n-2]
  d.d2[0] = 2.0 * (values[1] - values[0]) * invdx2;
  d.d2[n - 1] = 2.0 * (values[n - 2] - values[n - 1]) * invdx2;
  return d;
}

Derivatives derivatives(const RadiusProfile& profile) {
  return derivatives(profile.rho(), profile.dx());
}

double trapezoid(std::span<const double> values, double dx) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double sum = 0.5 * values[0];
  for (std::size_t j = 1; j + 1 < n; ++j) sum += values[j];
  sum += 0.5 * values[n - 1];
  return sum * dx;
}

GeometricState geometric_state(const RadiusProfile& profile) {
  const auto rho = profile.rho();
  const std::size_t n = rho.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (rho[j] <= 0.0) throw PinchError("geometric_state: radius touches the axis");
  }
  const auto d = derivatives(profile);

  GeometricState s;
  s.y.assign(rho.begin(), rho.end());
  s.v.resize(n);
  s.p.resize(n);
  s.k.resize(n);
  s.q.resize(n);
  s.H.resize(n);
  s.A2.resize(n);

  std::vector<double> area_density(n);
  std::vector<double> volume_density(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double slope2 = 1.0 + d.d1[j] * d.d1[j];
    const double v = std::sqrt(slope2);
    s.v[j] = v;
    s.p[j] = 1.0 / (rho[j] * v);
    s.k[j] = -d.d2[j] / (slope2 * v);
    s.q[j] = -d.d1[j] / (rho[j] * v);
    s.H[j] = s.k[j] + s.p[j];
    s.A2[j] = s.k[j] * s.k[j] + s.p[j] * s.p[j];
    area_density[j] = 2.0 * std::numbers::pi * rho[j] * v;
    volume_density[j] = rho[j] * rho[j];
  }
  s.surface_area = trapezoid(area_density, profile.dx());
  s.enclosed_volume = std::numbers::pi * trapezoid(volume_density, profile.dx());
  return s;
}

std::vector<double> surface_laplacian(const RadiusProfile& profile, std::span<const double> f) {
  const auto rho = profile.rho();
  const std::size_t n = rho.size();
  if (f.size() != n) throw std::invalid_argument("surface_laplacian: size mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (rho[j] <= 0.0) throw PinchError("surface_laplacian: radius touches the axis");
  }
  const double dx = profile.dx();
  const auto d = derivatives(profile);

  // flux[j] lives at x_{j+1/2}
  std::vector<double> flux(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double slope = (rho[j + 1] - rho[j]) / dx;
    const double v_half = std::sqrt(1.0 + slope * slope);
    const double rho_half = 0.5 * (rho[j] + rho[j + 1]);
    flux[j] = rho_half * (f[j + 1] - f[j]) / (dx * v_half);
  }

  std::vector<double> lap(n);
  for (std::size_t j = 0; j < n; ++j) {
    // reflected ghost flux is the negative of the first interior one
    const double right = j + 1 < n ? flux[j] : -flux[n - 2];
    const double left = j > 0 ? flux[j - 1] : -flux[0];
    const double v = std::sqrt(1.0 + d.d1[j] * d.d1[j]);
    lap[j] = (right - left) / (dx * rho[j] * v);
  }
  return lap;
}

IdentityResiduals identity_residuals(const GeometricState& state) {
  IdentityResiduals r;
  for (std::size_t j = 0; j < state.size(); ++j) {
    const double inv_y2 = 1.0 / (state.y[j] * state.y[j]);
    const double pq = state.p[j] * state.p[j] + state.q[j] * state.q[j];
    r.pq_vs_inverse_height = std::max(r.pq_vs_inverse_height, std::abs(pq - inv_y2) / inv_y2);
    r.vy_vs_inverse_p =
        std::max(r.vy_vs_inverse_p, std::abs(state.v[j] * state.y[j] * state.p[j] - 1.0));
  }
  return r;
}

} // namespace axiflow
