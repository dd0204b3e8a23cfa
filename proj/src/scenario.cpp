#include "axiflow/scenario.hpp"

#include <cmath>
#include <numbers>

namespace axiflow {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
  case ScenarioKind::Cylinder: return "cylinder";
  case ScenarioKind::PerturbedCylinder: return "perturbed_cylinder";
  case ScenarioKind::Neck: return "neck";
  case ScenarioKind::CatenoidSegment: return "catenoid_segment";
  }
  return "?";
}

Scenario Scenario::cylinder(double r, AxisInterval interval, int n_cells) {
  Scenario s;
  s.kind = ScenarioKind::Cylinder;
  s.r = r;
  s.interval = interval;
  s.n_cells = n_cells;
  return s;
}

Scenario Scenario::perturbed_cylinder(double r, double eps, int m, AxisInterval interval,
                                      int n_cells) {
  Scenario s = cylinder(r, interval, n_cells);
  s.kind = ScenarioKind::PerturbedCylinder;
  s.eps = eps;
  s.m = m;
  return s;
}

Scenario Scenario::neck(double r0, double amp, AxisInterval interval, int n_cells) {
  Scenario s;
  s.kind = ScenarioKind::Neck;
  s.r0 = r0;
  s.amp = amp;
  s.interval = interval;
  s.n_cells = n_cells;
  return s;
}

Scenario Scenario::catenoid_segment(double c, double x0, AxisInterval interval, int n_cells) {
  Scenario s;
  s.kind = ScenarioKind::CatenoidSegment;
  s.c = c;
  s.x0 = x0;
  s.interval = interval;
  s.n_cells = n_cells;
  return s;
}

RadiusProfile Scenario::build() const {
  const double a = interval.a;
  const double len = interval.length();
  switch (kind) {
  case ScenarioKind::Cylinder:
    return sample_profile(interval, n_cells, [&](double) { return r; });
  case ScenarioKind::PerturbedCylinder:
    if (m < 0) throw std::invalid_argument("perturbed cylinder: m must be >= 0");
    return sample_profile(interval, n_cells, [&](double x) {
      return r + eps * std::cos(m * std::numbers::pi * (x - a) / len);
    });
  case ScenarioKind::Neck:
    return sample_profile(interval, n_cells, [&](double x) {
      return r0 + amp * std::cos(2.0 * std::numbers::pi * (x - a) / len);
    });
  case ScenarioKind::CatenoidSegment:
    if (!(c > 0.0)) throw std::invalid_argument("catenoid: c must be positive");
    return sample_profile(interval, n_cells, [&](double x) { return c * std::cosh((x - x0) / c); });
  }
  throw std::logic_error("unreachable");
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json j;
  j["scenario"] = std::string(to_string(kind));
  switch (kind) {
  case ScenarioKind::Cylinder: j["r"] = r; break;
  case ScenarioKind::PerturbedCylinder:
    j["r"] = r;
    j["eps"] = eps;
    j["m"] = m;
    break;
  case ScenarioKind::Neck:
    j["r0"] = r0;
    j["amp"] = amp;
    break;
  case ScenarioKind::CatenoidSegment:
    j["c"] = c;
    j["x0"] = x0;
    break;
  }
  j["a"] = interval.a;
  j["b"] = interval.b;
  j["n_cells"] = n_cells;
  return j;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  const auto name = j.at("scenario").get<std::string>();
  Scenario s;
  s.interval = AxisInterval(j.value("a", 0.0), j.value("b", 1.0));
  s.n_cells = j.value("n_cells", 128);
  if (name == "cylinder") {
    s.kind = ScenarioKind::Cylinder;
  } else if (name == "perturbed_cylinder") {
    s.kind = ScenarioKind::PerturbedCylinder;
  } else if (name == "neck") {
    s.kind = ScenarioKind::Neck;
  } else if (name == "catenoid_segment" || name == "catenoid") {
    s.kind = ScenarioKind::CatenoidSegment;
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "'");
  }
  s.r = j.value("r", s.r);
  s.eps = j.value("eps", s.eps);
  s.m = j.value("m", s.m);
  s.r0 = j.value("r0", s.r0);
  s.amp = j.value("amp", s.amp);
  s.c = j.value("c", s.c);
  s.x0 = j.value("x0", s.x0);
  return s;
}

} // namespace axiflow
