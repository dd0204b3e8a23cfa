#pragma once

#include <json.hpp>

#include "axiflow/profile.hpp"

namespace axiflow {

enum class ScenarioKind { Cylinder, PerturbedCylinder, Neck, CatenoidSegment };

// Preset initial curves. Every flowable preset is built from cosine modes
// with a whole number of half periods on [a, b], so rho' vanishes at both
// ends. The catenoid segment is for geometry and fitting only.
struct Scenario {
  ScenarioKind kind{ScenarioKind::Cylinder};
  AxisInterval interval{0.0, 1.0};
  int n_cells{128};

  double r{1.0};    // cylinder / perturbed cylinder radius
  double eps{0.1};  // perturbation amplitude
  int m{2};         // half periods of the perturbation: cos(m pi (x - a)/(b - a))
  double r0{0.6};   // neck: mean radius
  double amp{0.35}; // neck: one full cosine period, throat at the midpoint
  double c{1.0};    // catenoid: c cosh((x - x0)/c)
  double x0{0.5};

  static Scenario cylinder(double r, AxisInterval interval = {0.0, 1.0}, int n_cells = 128);
  static Scenario perturbed_cylinder(double r, double eps, int m, AxisInterval interval = {0.0, 1.0},
                                     int n_cells = 128);
  static Scenario neck(double r0, double amp, AxisInterval interval = {0.0, 1.0},
                       int n_cells = 128);
  static Scenario catenoid_segment(double c, double x0, AxisInterval interval = {0.0, 1.0},
                                   int n_cells = 128);

  bool flowable() const { return kind != ScenarioKind::CatenoidSegment; }
  RadiusProfile build() const;

  // {"scenario": name, <parameters>, "a", "b", "n_cells"}
  nlohmann::json to_json() const;
  static Scenario from_json(const nlohmann::json& j);
};

std::string_view to_string(ScenarioKind kind);

} // namespace axiflow
