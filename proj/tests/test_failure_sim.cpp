#include <doctest.h>

#include <cmath>

#include "rocoin/errors.hpp"
#include "rocoin/failure_sim.hpp"
#include "rocoin/planner.hpp"
#include "support/instance_gen.hpp"

using namespace rocoin;

namespace {

// Two groups of two devices each, every member p_out = 0.5, all running
// the same student. Closed-form full coverage: (1 - 0.25)^2 = 0.5625.
struct TwoPairSetup {
  std::vector<DeviceProfile> devices = {{"a0", 1e7, 1e6, 1000, 0.5},
                                        {"a1", 2e7, 1e6, 1000, 0.5},
                                        {"b0", 5e6, 1e6, 1000, 0.5},
                                        {"b1", 8e6, 1e6, 1000, 0.5}};
  std::vector<StudentArch> students = {{"s", 1e7, 5e5, 1000}};
  AssignmentPlan plan;
  TwoPairSetup() {
    plan.groups = {{{"a0", "a1"}, 1e6, 1.5e7}, {{"b0", "b1"}, 1e6, 6.5e6}};
    plan.partitions = {{{0}}, {{1}}};
    plan.matching = {0, 1};
    plan.student_choice = {"s", "s"};
    plan.predicted_latency_s = 0.0;
  }
};

}  // namespace

TEST_CASE("zero outage probability gives full coverage and the planned latency") {
  const std::vector<DeviceProfile> devices = {{"a", 1e7, 1e6, 1000, 0.0},
                                              {"b", 5e6, 1e6, 1000, 0.0}};
  const std::vector<StudentArch> students = {{"s", 1e7, 5e5, 500}};
  ActivationMatrix acts;
  acts.values = Matrix(1, 2);
  acts.values(0, 0) = 2.0;
  acts.values(0, 1) = 1.0;
  PlannerConfig cfg;
  cfg.d_th = 1e9;
  cfg.p_th = 0.25;
  const auto plan = make_plan(devices, acts, students, cfg);

  FailureScenario scenario;
  scenario.mode = FailureMode::outage_sampling;
  scenario.trials = 500;
  scenario.seed = 3;
  const auto report = simulate(plan, devices, students, scenario);
  CHECK(report.coverage_rate == 1.0);
  CHECK(report.accuracy_proxy == 1.0);
  CHECK(report.zero_coverage_trials == 0);
  REQUIRE(report.latency.defined);
  CHECK(report.latency.mean == plan.predicted_latency_s);
  CHECK(report.latency.max == plan.predicted_latency_s);
}

TEST_CASE("Monte Carlo coverage converges to the closed form") {
  const TwoPairSetup setup;
  CHECK(coverage_closed_form(setup.plan, setup.devices) == doctest::Approx(0.5625));

  FailureScenario scenario;
  scenario.mode = FailureMode::outage_sampling;
  scenario.trials = 100000;
  scenario.seed = 11;
  const auto report = simulate(setup.plan, setup.devices, setup.students, scenario);
  CHECK(std::abs(report.coverage_rate - 0.5625) < 0.005);
  // Each group survives with probability 0.75.
  CHECK(std::abs(report.accuracy_proxy - 0.75) < 0.005);
  CHECK(std::abs(report.group_loss_rate[0] - 0.25) < 0.005);
  CHECK(std::abs(report.group_loss_rate[1] - 0.25) < 0.005);
}

TEST_CASE("coverage_closed_form special cases") {
  const std::vector<DeviceProfile> devices = {{"a", 1e7, 1e6, 1000, 0.5},
                                              {"z", 1e7, 1e6, 1000, 0.0},
                                              {"h", 1e7, 1e6, 1000, 0.9}};
  AssignmentPlan plan;
  plan.groups = {{{"a"}, 1e6, 1e7}};
  CHECK(coverage_closed_form(plan, devices) == doctest::Approx(0.5));
  // A p_out = 0 member makes its group a sure thing.
  plan.groups = {{{"z", "h"}, 1e6, 1e7}, {{"a"}, 1e6, 1e7}};
  CHECK(coverage_closed_form(plan, devices) == doctest::Approx(0.5));
}

TEST_CASE("crashing every device zeroes coverage and leaves latency undefined") {
  const TwoPairSetup setup;
  FailureScenario scenario;
  scenario.mode = FailureMode::crash_subset;
  scenario.crash_count = 4;
  scenario.trials = 50;
  const auto report = simulate(setup.plan, setup.devices, setup.students, scenario);
  CHECK(report.coverage_rate == 0.0);
  CHECK(report.accuracy_proxy == 0.0);
  CHECK(report.zero_coverage_trials == 50);
  CHECK_FALSE(report.latency.defined);

  scenario.crash_count = 5;
  CHECK_THROWS_AS(simulate(setup.plan, setup.devices, setup.students, scenario),
                  ValidationError);
}

TEST_CASE("zero-coverage trials are counted, not averaged") {
  const std::vector<DeviceProfile> devices = {{"a", 1e7, 1e6, 1000, 0.9}};
  const std::vector<StudentArch> students = {{"s", 1e7, 5e5, 1000}};
  AssignmentPlan plan;
  plan.groups = {{{"a"}, 1e6, 1e7}};
  plan.partitions = {{{0}}};
  plan.matching = {0};
  plan.student_choice = {"s"};

  FailureScenario scenario;
  scenario.mode = FailureMode::outage_sampling;
  scenario.trials = 2000;
  scenario.seed = 21;
  const auto report = simulate(plan, devices, students, scenario);
  CHECK(report.zero_coverage_trials > 1500);
  CHECK(report.zero_coverage_trials < 2000);
  REQUIRE(report.latency.defined);
  // Every surviving trial has exactly the device's own delay.
  const double delay = 1e7 / 1e7 + 1000.0 / 1000.0;
  CHECK(report.latency.mean == doctest::Approx(delay));
  CHECK(report.latency.p50 == doctest::Approx(delay));
  CHECK(report.coverage_rate ==
        doctest::Approx(1.0 - report.zero_coverage_trials / 2000.0));
}

TEST_CASE("percentiles are monotone") {
  const TwoPairSetup setup;
  FailureScenario scenario;
  scenario.mode = FailureMode::outage_sampling;
  scenario.trials = 5000;
  scenario.seed = 31;
  const auto r = simulate(setup.plan, setup.devices, setup.students, scenario);
  REQUIRE(r.latency.defined);
  CHECK(r.latency.p50 <= r.latency.p90);
  CHECK(r.latency.p90 <= r.latency.p99);
  CHECK(r.latency.p99 <= r.latency.max);
  CHECK(r.latency.mean <= r.latency.max);
}

TEST_CASE("simulation is deterministic for a fixed seed") {
  const TwoPairSetup setup;
  FailureScenario scenario;
  scenario.mode = FailureMode::crash_subset;
  scenario.crash_count = 2;
  scenario.trials = 3000;
  scenario.seed = 77;
  const auto a = simulate(setup.plan, setup.devices, setup.students, scenario);
  const auto b = simulate(setup.plan, setup.devices, setup.students, scenario);
  CHECK(a.coverage_rate == b.coverage_rate);
  CHECK(a.accuracy_proxy == b.accuracy_proxy);
  CHECK(a.latency.mean == b.latency.mean);
  CHECK(a.group_loss_rate == b.group_loss_rate);
}

TEST_CASE("accuracy proxy falls as more devices crash") {
  const auto students = synth_students("paper-cifar");
  const auto acts = synth_activations(16, 4, 6, 10.0, 4);
  PlannerConfig cfg;
  cfg.d_th = 4e7;
  cfg.p_th = 0.25;
  std::vector<DeviceProfile> devices;
  AssignmentPlan plan;
  for (std::uint64_t seed = 2024;; ++seed) {
    REQUIRE(seed < 2100);
    devices = synth_devices(8, 0.7, seed);
    try {
      plan = make_plan(devices, acts, students, cfg);
      break;
    } catch (const InfeasibleError&) {
    }
  }

  double prev = 1.1;
  for (int crash = 0; crash <= 8; ++crash) {
    FailureScenario scenario;
    scenario.mode = FailureMode::crash_subset;
    scenario.crash_count = crash;
    scenario.trials = 2000;
    scenario.seed = 900 + static_cast<std::uint64_t>(crash);
    const auto r = simulate(plan, devices, students, scenario);
    CHECK(r.accuracy_proxy <= prev + 1e-9);
    prev = r.accuracy_proxy;
  }
}

TEST_CASE("tight outage thresholds buy resilience under crashes") {
  const auto students = synth_students("paper-cifar");
  const auto acts = synth_activations(16, 4, 6, 10.0, 8);
  PlannerConfig cfg;
  cfg.d_th = 4e7;
  cfg.seed = 1;

  std::vector<DeviceProfile> devices;
  AssignmentPlan replicated, spread;
  for (std::uint64_t seed = 551;; ++seed) {
    REQUIRE(seed < 600);
    devices = synth_devices(8, 0.6, seed);
    try {
      cfg.p_th = 0.25;
      replicated = make_plan(devices, acts, students, cfg);
      cfg.p_th = 0.9;
      spread = make_plan(devices, acts, students, cfg);
      break;
    } catch (const InfeasibleError&) {
    }
  }
  CHECK(replicated.groups.size() < spread.groups.size());

  FailureScenario scenario;
  scenario.mode = FailureMode::crash_subset;
  scenario.crash_count = 4;
  scenario.trials = 30;
  scenario.seed = 13;
  const auto r_rep = simulate(replicated, devices, students, scenario);
  const auto r_spr = simulate(spread, devices, students, scenario);
  CHECK(r_rep.accuracy_proxy >= r_spr.accuracy_proxy);
}

TEST_CASE("heterogeneity_scenario bands") {
  const auto level0 = heterogeneity_scenario(0, 42);
  REQUIRE(level0.size() == 8);
  for (const auto& d : level0) {
    CHECK(d.core_flops == 17.5e6);
    CHECK(d.tran_bps == 750.0);
  }

  const auto level5 = heterogeneity_scenario(5, 42);
  for (const auto& d : level5) {
    CHECK(d.core_flops >= 2.5e6);
    CHECK(d.core_flops <= 32.5e6);
    CHECK(d.tran_bps >= 500.0);
    CHECK(d.tran_bps <= 1000.0);
  }
  // The full band actually spreads.
  double lo = 1e18, hi = 0.0;
  for (const auto& d : level5) {
    lo = std::min(lo, d.core_flops);
    hi = std::max(hi, d.core_flops);
  }
  CHECK(hi - lo > 5e6);

  CHECK(heterogeneity_scenario(3, 7) == heterogeneity_scenario(3, 7));
  CHECK(heterogeneity_scenario(3, 7) != heterogeneity_scenario(3, 8));
  CHECK_THROWS_AS(heterogeneity_scenario(6, 1), ValidationError);
}
