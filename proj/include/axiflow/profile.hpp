#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace axiflow {

// Raised when a radius reaches the rotation axis (rho <= 0).
class PinchError : public std::runtime_error {
public:
  explicit PinchError(const std::string& what) : std::runtime_error(what) {}
};

struct AxisInterval {
  double a{0.0};
  double b{1.0};

  AxisInterval() = default;
  AxisInterval(double a_in, double b_in);

  double length() const { return b - a; }

  bool operator==(const AxisInterval&) const = default;
};

constexpr int kMinCells = 16;

// Generating curve of an axially symmetric surface, sampled at the
// n_cells + 1 uniform nodes x_j = a + j*(b-a)/n_cells. Both ends carry a
// homogeneous Neumann condition realised by ghost reflection.
class RadiusProfile {
public:
  RadiusProfile(AxisInterval interval, std::vector<double> rho);

  const AxisInterval& interval() const { return interval_; }
  int n_cells() const { return static_cast<int>(rho_.size()) - 1; }
  std::size_t n_nodes() const { return rho_.size(); }
  double dx() const { return interval_.length() / n_cells(); }
  double x(std::size_t j) const { return interval_.a + static_cast<double>(j) * dx(); }
  std::vector<double> nodes() const;

  std::span<const double> rho() const { return rho_; }
  double rho(std::size_t j) const { return rho_[j]; }
  double min_rho() const;

  bool operator==(const RadiusProfile&) const = default;

private:
  AxisInterval interval_;
  std::vector<double> rho_;
};

// Builds a profile by sampling f at the uniform nodes.
template <class F>
RadiusProfile sample_profile(AxisInterval interval, int n_cells, F&& f) {
  std::vector<double> rho(static_cast<std::size_t>(n_cells) + 1);
  const double h = interval.length() / n_cells;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    rho[j] = f(interval.a + static_cast<double>(j) * h);
  }
  return RadiusProfile(interval, std::move(rho));
}

struct Derivatives {
  std::vector<double> d1;
  std::vector<double> d2;
};

// Second-order central differences with even ghost reflection at both ends,
// so d1 is exactly zero at the first and last node. Works on any nodal data,
// not only on admissible radii.
Derivatives derivatives(std::span<const double> values, double dx);
Derivatives derivatives(const RadiusProfile& profile);

struct GeometricState {
  std::vector<double> y;  // height = rho
  std::vector<double> v;  // gradient function sqrt(1 + rho'^2)
  std::vector<double> p;  // rotational curvature 1/(rho v)
  std::vector<double> k;  // meridian curvature -rho''/v^3
  std::vector<double> q;  // <nu, i1>/y
  std::vector<double> H;  // k + p
  std::vector<double> A2; // k^2 + p^2
  double surface_area{0.0};
  double enclosed_volume{0.0};

  std::size_t size() const { return y.size(); }
};

GeometricState geometric_state(const RadiusProfile& profile);

// Composite trapezoid rule on uniform nodes, summed left to right.
double trapezoid(std::span<const double> values, double dx);

// Laplace-Beltrami operator of a rotationally symmetric function f on the
// surface generated by profile, in conservative flux form:
//   (1/(rho v)) d/dx (rho f' / v).
std::vector<double> surface_laplacian(const RadiusProfile& profile, std::span<const double> f);

struct IdentityResiduals {
  double pq_vs_inverse_height{0.0}; // max |p^2 + q^2 - y^-2| / y^-2
  double vy_vs_inverse_p{0.0};      // max |v y p - 1|
};

IdentityResiduals identity_residuals(const GeometricState& state);

} // namespace axiflow
