#include "rocoin/failure_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "rocoin/assignment.hpp"
#include "rocoin/errors.hpp"
#include "rocoin/grouping.hpp"
#include "rocoin/rng.hpp"

namespace rocoin {

namespace {

struct TrialResult {
  int delivered_groups = 0;
  double latency = 0.0;  // valid when delivered_groups > 0
  std::uint32_t lost_mask = 0;
};

double percentile(const std::vector<double>& sorted, double q) {
  // Nearest-rank on a sorted sample.
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  if (rank == 0) rank = 1;
  if (rank > n) rank = n;
  return sorted[rank - 1];
}

}  // namespace

SimReport simulate(const AssignmentPlan& plan,
                   const std::vector<DeviceProfile>& devices,
                   const std::vector<StudentArch>& students,
                   const FailureScenario& scenario) {
  const int n = static_cast<int>(devices.size());
  const std::size_t k_count = plan.groups.size();
  if (scenario.trials < 1)
    throw ValidationError("simulate: trials must be >= 1");
  if (scenario.mode == FailureMode::crash_subset &&
      (scenario.crash_count < 0 || scenario.crash_count > n))
    throw ValidationError("simulate: crash_count must lie in [0, N]");
  if (k_count > 32)
    throw ValidationError("simulate: more than 32 groups unsupported");

  std::unordered_map<std::string, std::size_t> dev_pos;
  for (std::size_t i = 0; i < devices.size(); ++i) dev_pos[devices[i].id] = i;

  // Member positions and per-member delays under each group's student.
  std::vector<std::vector<std::size_t>> member_pos(k_count);
  std::vector<std::vector<double>> member_delay(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const StudentArch& s = student_by_id(students, plan.student_choice[k]);
    for (const auto& id : plan.groups[k].members) {
      const auto it = dev_pos.find(id);
      if (it == dev_pos.end()) throw ValidationError("simulate: unknown device id: " + id);
      const DeviceProfile& d = devices[it->second];
      member_pos[k].push_back(it->second);
      member_delay[k].push_back(s.flops / d.core_flops + s.output_bits / d.tran_bps);
    }
  }

  std::vector<TrialResult> results(static_cast<std::size_t>(scenario.trials));
  std::vector<char> failed(devices.size());
  std::vector<std::size_t> order(devices.size());
  for (int t = 0; t < scenario.trials; ++t) {
    Rng rng(derive_seed(scenario.seed, static_cast<std::uint64_t>(t)));
    std::fill(failed.begin(), failed.end(), 0);
    if (scenario.mode == FailureMode::outage_sampling) {
      for (std::size_t i = 0; i < devices.size(); ++i)
        failed[i] = next_unit(rng) < devices[i].p_out ? 1 : 0;
    } else {
      std::iota(order.begin(), order.end(), 0);
      for (int c = 0; c < scenario.crash_count; ++c) {
        const std::size_t pick =
            static_cast<std::size_t>(c) + next_index(rng, devices.size() - static_cast<std::size_t>(c));
        std::swap(order[static_cast<std::size_t>(c)], order[pick]);
        failed[order[static_cast<std::size_t>(c)]] = 1;
      }
    }

    TrialResult& r = results[static_cast<std::size_t>(t)];
    for (std::size_t k = 0; k < k_count; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t mi = 0; mi < member_pos[k].size(); ++mi)
        if (!failed[member_pos[k][mi]]) best = std::min(best, member_delay[k][mi]);
      if (std::isinf(best)) {
        r.lost_mask |= (1u << k);
      } else {
        r.delivered_groups++;
        r.latency = std::max(r.latency, best);
      }
    }
  }

  SimReport report;
  report.trials = scenario.trials;
  report.group_loss_rate.assign(k_count, 0.0);
  std::vector<double> latencies;
  double proxy_sum = 0.0;
  int full = 0;
  for (const auto& r : results) {
    if (r.delivered_groups == static_cast<int>(k_count)) full++;
    if (r.delivered_groups == 0)
      report.zero_coverage_trials++;
    else
      latencies.push_back(r.latency);
    proxy_sum += static_cast<double>(r.delivered_groups) / static_cast<double>(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
      if (r.lost_mask & (1u << k)) report.group_loss_rate[k] += 1.0;
  }
  const double trials_d = static_cast<double>(scenario.trials);
  report.coverage_rate = static_cast<double>(full) / trials_d;
  report.accuracy_proxy = proxy_sum / trials_d;
  for (auto& rate : report.group_loss_rate) rate /= trials_d;

  if (!latencies.empty()) {
    std::sort(latencies.begin(), latencies.end());
    report.latency.defined = true;
    report.latency.mean =
        std::accumulate(latencies.begin(), latencies.end(), 0.0) /
        static_cast<double>(latencies.size());
    report.latency.p50 = percentile(latencies, 0.50);
    report.latency.p90 = percentile(latencies, 0.90);
    report.latency.p99 = percentile(latencies, 0.99);
    report.latency.max = latencies.back();
  }
  return report;
}

double coverage_closed_form(const AssignmentPlan& plan,
                            const std::vector<DeviceProfile>& devices) {
  double coverage = 1.0;
  for (const auto& g : plan.groups)
    coverage *= 1.0 - group_outage_product(g, devices);
  return coverage;
}

std::vector<DeviceProfile> heterogeneity_scenario(int level, std::uint64_t seed,
                                                  double p_out, double mem_bytes) {
  if (level < 0 || level > 5)
    throw ValidationError("heterogeneity_scenario: level must lie in [0,5]");
  static constexpr double kFlopsSpread[6] = {0.0, 10e6, 15e6, 20e6, 25e6, 30e6};
  static constexpr double kRateSpread[6] = {0.0, 100.0, 200.0, 300.0, 400.0, 500.0};
  static constexpr double kFlopsMid = 17.5e6;
  static constexpr double kRateMid = 750.0;

  Rng rng(seed);
  std::vector<DeviceProfile> devices;
  for (int i = 0; i < 8; ++i) {
    DeviceProfile d;
    d.id = "dev-" + std::to_string(i);
    const double fs = kFlopsSpread[level];
    const double rs = kRateSpread[level];
    d.core_flops = kFlopsMid + (fs == 0.0 ? 0.0 : next_uniform(rng, -fs / 2, fs / 2));
    d.tran_bps = kRateMid + (rs == 0.0 ? 0.0 : next_uniform(rng, -rs / 2, rs / 2));
    d.mem_bytes = mem_bytes;
    d.p_out = p_out;
    devices.push_back(std::move(d));
  }
  return devices;
}

}  // namespace rocoin
