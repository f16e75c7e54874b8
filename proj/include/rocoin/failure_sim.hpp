#pragma once

#include <cstdint>
#include <vector>

#include "rocoin/types.hpp"

namespace rocoin {

enum class FailureMode { outage_sampling, crash_subset };

struct FailureScenario {
  FailureMode mode = FailureMode::outage_sampling;
  int crash_count = 0;  // crash_subset mode: devices removed per trial
  int trials = 1;
  std::uint64_t seed = 0;
};

struct LatencyStats {
  bool defined = false;  // false when no trial had a surviving group
  double mean = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

struct SimReport {
  int trials = 0;
  double coverage_rate = 0.0;   // fraction of trials where all K groups delivered
  double accuracy_proxy = 0.0;  // mean delivered-partition fraction per trial
  LatencyStats latency;         // over trials with at least one surviving group
  int zero_coverage_trials = 0; // trials where no group delivered anything
  std::vector<double> group_loss_rate;  // per group, fraction of trials lost
};

/// Monte Carlo failure injection. Per trial, outage_sampling fails each
/// device independently with its own p_out; crash_subset removes a uniform
/// random subset of crash_count devices. A group delivers iff at least one
/// member survives, and then at the latency of its fastest surviving
/// member. Trial latency is the slowest delivering group. Trials use
/// per-trial derived seeds, so results do not depend on evaluation order.
SimReport simulate(const AssignmentPlan& plan,
                   const std::vector<DeviceProfile>& devices,
                   const std::vector<StudentArch>& students,
                   const FailureScenario& scenario);

/// Exact probability that every group delivers at least one output under
/// independent per-device outages: product over groups of
/// (1 - product of member p_out).
double coverage_closed_form(const AssignmentPlan& plan,
                            const std::vector<DeviceProfile>& devices);

/// Eight-device set whose compute rates and transmit rates are drawn
/// uniformly from bands of level-dependent width (level 0 collapses to
/// identical devices) centered at 17.5 MFLOP/s and 750 bit/s. Memory and
/// outage probability are held fixed; only the two banded axes vary.
std::vector<DeviceProfile> heterogeneity_scenario(int level, std::uint64_t seed,
                                                  double p_out = 0.3,
                                                  double mem_bytes = 1.5e6);

}  // namespace rocoin
