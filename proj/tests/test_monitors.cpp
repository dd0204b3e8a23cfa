#include <doctest.h>

#include <cmath>
#include <numbers>

#include "axiflow/monitors.hpp"

using namespace axiflow;

namespace {

constexpr double pi = std::numbers::pi;

RadiusProfile cylinder(double r, int n = 32) {
  return sample_profile({0, 1}, n, [&](double) { return r; });
}

RadiusProfile perturbed(int n) {
  return sample_profile({0, 1}, n, [](double x) { return 1.0 + 0.1 * std::cos(2 * pi * x); });
}

RadiusProfile neck(int n = 128) {
  return sample_profile({0, 1}, n, [](double x) { return 0.6 + 0.35 * std::cos(2 * pi * x); });
}

FlowTrajectory flow(const RadiusProfile& p0, FlowKind kind, double t_end, int every = 100,
                    double dt_init = 1e-3) {
  FlowConfig cfg;
  cfg.kind = kind;
  cfg.t_end = t_end;
  cfg.n_cells = p0.n_cells();
  cfg.snapshot_every = every;
  cfg.dt_init = dt_init;
  return run(p0, cfg);
}

// A trajectory holding one profile and a log row computed from it.
FlowTrajectory frozen(const RadiusProfile& p, FlowKind kind = FlowKind::MeanCurvature) {
  FlowTrajectory traj;
  traj.kind = kind;
  traj.snapshots.push_back({0, 0.0, p});
  traj.step_log.push_back(make_step_record(0.0, 0.0, p, geometric_state(p)));
  return traj;
}

} // namespace

TEST_CASE("h bounds") {
  const auto still = flow(cylinder(1.0), FlowKind::VolumePreserving, 0.1);
  const auto rec = check_h_bounds(still);
  CHECK(rec.passed);
  CHECK(rec.constants.at("c2") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.constants.at("c3") == doctest::Approx(1.0).epsilon(1e-12));

  auto broken = still;
  broken.step_log[3].h = -1.0;
  const auto bad = check_h_bounds(broken);
  CHECK_FALSE(bad.passed);
  CHECK(bad.at_time == broken.step_log[3].t);
  broken.step_log[3].h = 0.0;
  CHECK_FALSE(check_h_bounds(broken).passed);

  CHECK_THROWS_AS(check_h_bounds(flow(cylinder(1.0), FlowKind::MeanCurvature, 0.01)),
                  WrongKindError);
}

TEST_CASE("vy bound") {
  SUBCASE("shrinking cylinder: vy = rho decreases") {
    const auto traj = flow(cylinder(1.0), FlowKind::MeanCurvature, 0.3);
    CHECK(check_vy(traj).passed);
    for (std::size_t i = 1; i < traj.step_log.size(); ++i) {
      CHECK(traj.step_log[i].max_vy < traj.step_log[i - 1].max_vy);
    }
    CHECK(vy_bound_constant(traj) == 1.0);
  }
  SUBCASE("stationary cylinder, volume flow") {
    const auto traj = flow(cylinder(0.7), FlowKind::VolumePreserving, 0.1);
    const auto rec = check_vy(traj);
    CHECK(rec.passed);
    CHECK(rec.constants.at("c3") == doctest::Approx(1 / 0.7));
    CHECK(vy_bound_constant(traj) == doctest::Approx(0.7 + 0.1 / 0.7));
  }
  SUBCASE("neck pinch") {
    CHECK(check_vy(flow(neck(), FlowKind::MeanCurvature, 0.5)).passed);
  }
  SUBCASE("fabricated violation") {
    auto traj = flow(cylinder(1.0), FlowKind::MeanCurvature, 0.05);
    traj.step_log[5].max_vy = 1.01;
    const auto rec = check_vy(traj);
    CHECK_FALSE(rec.passed);
    CHECK(rec.worst_violation == doctest::Approx(0.01));
    CHECK(rec.at_time == traj.step_log[5].t);
  }
}

TEST_CASE("k/p bound") {
  const auto cyl = flow(cylinder(1.0), FlowKind::MeanCurvature, 0.1);
  const auto rec = check_k_over_p(cyl);
  CHECK(rec.passed);
  CHECK(rec.constants.at("c1") == 1.0);
  for (const auto& r : cyl.step_log) CHECK(r.max_k_over_p == 0.0);

  SUBCASE("catenoid geometry") {
    const auto cat = sample_profile({0, 1}, 256, [](double x) { return 0.8 * std::cosh((x - 0.5) / 0.8); });
    const auto s = geometric_state(cat);
    for (std::size_t j = 1; j + 1 < s.size(); ++j) CHECK(s.k[j] / s.p[j] == doctest::Approx(-1).epsilon(1e-4));
    CHECK(check_k_over_p(frozen(cat)).passed);
  }
  SUBCASE("perturbed cylinder volume run never exceeds its initial maximum") {
    const auto traj = flow(perturbed(64), FlowKind::VolumePreserving, 0.1);
    const auto r = check_k_over_p(traj);
    CHECK(r.passed);
    const double c1 = r.constants.at("c1");
    for (const auto& row : traj.step_log) CHECK(row.max_k_over_p <= c1 * (1 + 1e-6));
  }
}

TEST_CASE("|k|/p bound") {
  const auto traj = flow(cylinder(1.0), FlowKind::MeanCurvature, 0.3);
  const double C = 1 / std::sqrt(1 - 0.6);
  CHECK(traj.step_log.back().max_H == doctest::Approx(C).epsilon(1e-3));
  const auto rec = check_abs_k_over_p(traj, traj.step_log.back().max_H);
  CHECK(rec.passed);
  CHECK(rec.constants.at("c4") == 1.0);
  CHECK_THROWS_AS(check_abs_k_over_p(traj, 1.2), HNotBoundedError);

  const auto cat = sample_profile({0, 1}, 128, [](double x) { return std::cosh(x - 0.5); });
  const auto s = geometric_state(cat);
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    CHECK(std::abs(s.k[j]) / s.p[j] == doctest::Approx(1.0).epsilon(1e-4));
  }

  const auto vol = flow(perturbed(64), FlowKind::VolumePreserving, 0.1, 10);
  double C_obs = 0;
  for (const auto& r : vol.step_log) C_obs = std::max(C_obs, r.max_H);
  CHECK(check_abs_k_over_p(vol, C_obs).passed);
}

TEST_CASE("evolution residuals") {
  SUBCASE("needs three snapshots") {
    CHECK_THROWS_AS(evolution_residuals(frozen(cylinder(1.0)), {Quantity::y}),
                    InsufficientSnapshotsError);
  }
  SUBCASE("stationary cylinder cancels exactly") {
    const auto traj = flow(cylinder(1.0), FlowKind::VolumePreserving, 0.05, 10);
    const auto t = evolution_residuals(traj, {Quantity::y, Quantity::H, Quantity::v});
    CHECK(t.max(Quantity::y) <= 1e-10);
    CHECK(t.max(Quantity::H) <= 1e-10);
    CHECK(t.max(Quantity::v) <= 1e-10);
  }
  SUBCASE("shrinking cylinder: only time discretisation error, first order in dt") {
    // rho' = 0 everywhere, so every residual is temporal
    double prev = 0;
    for (double dt : {1e-4, 5e-5, 2.5e-5}) { // below the cfl cap 0.25 dx^2
      const auto traj = flow(cylinder(1.0), FlowKind::MeanCurvature, 0.1, 1, dt);
      const double r = evolution_residuals(traj, {Quantity::y}).max(Quantity::y);
      CHECK(r <= 10 * dt);
      if (prev > 0) CHECK(std::log2(prev / r) == doctest::Approx(1.0).epsilon(0.05));
      prev = r;
    }
  }
  SUBCASE("perturbed cylinder converges in space") {
    for (auto kind : {FlowKind::MeanCurvature, FlowKind::VolumePreserving}) {
      std::map<Quantity, double> prev;
      for (int n : {64, 128, 256}) {
        const auto traj = flow(perturbed(n), kind, 4e-7, 100, 1e-9);
        const auto t = evolution_residuals(
            traj, {Quantity::y, Quantity::v, Quantity::k, Quantity::p, Quantity::H});
        for (auto q : {Quantity::y, Quantity::v, Quantity::k, Quantity::p, Quantity::H}) {
          if (prev.count(q)) {
            INFO(to_string(kind), " ", to_string(q), " n=", n);
            CHECK(std::log2(prev[q] / t.max(q)) >= 1.9);
          }
          prev[q] = t.max(q);
        }
      }
    }
  }
}

TEST_CASE("extension criterion") {
  SUBCASE("neck pinch blows up with H") {
    const auto traj = flow(neck(), FlowKind::MeanCurvature, 0.5);
    const auto v = extension_criterion(traj);
    CHECK(v.singular);
    CHECK(v.h_growth >= 10);
    CHECK_FALSE(v.theorem_violation);
    CHECK(v.passed);
  }
  SUBCASE("cylinder stopped before its singular time") {
    const auto v = extension_criterion(flow(cylinder(1.0), FlowKind::MeanCurvature, 0.4));
    CHECK_FALSE(v.singular);
    CHECK(v.passed);
  }
  SUBCASE("fabricated blow-up with clamped H") {
    FlowTrajectory traj = frozen(cylinder(1.0));
    for (int i = 1; i <= 5; ++i) {
      auto r = traj.step_log.front();
      r.t = 0.01 * i;
      r.max_A = std::pow(10.0, i);
      r.max_H = 1.0;
      traj.step_log.push_back(r);
    }
    traj.termination = Termination::BlowupDetected;
    const auto v = extension_criterion(traj);
    CHECK(v.theorem_violation);
    CHECK_FALSE(v.passed);
    CHECK_FALSE(build_report(traj).all_passed());
  }
}

TEST_CASE("report") {
  const auto traj = flow(neck(64), FlowKind::MeanCurvature, 0.5);
  const auto a = build_report(traj);
  const auto b = build_report(traj);
  CHECK(a.all_passed());
  REQUIRE(a.checks.size() == 4);
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].worst_violation == b.checks[i].worst_violation);
  }
  CHECK(a.c0 == doctest::Approx(1 + a.C * a.c4));

  const auto vol = build_report(flow(perturbed(32), FlowKind::VolumePreserving, 0.05));
  CHECK(vol.checks.size() == 5);
  CHECK(vol.checks.front().name == "h_bounds");
  CHECK(vol.all_passed());
}
