#include "rocoin/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rocoin/errors.hpp"
#include "rocoin/rng.hpp"

namespace rocoin {

double capacity_similarity(const DeviceProfile& a, const DeviceProfile& b) {
  const double dm = a.mem_bytes - b.mem_bytes;
  const double dc = a.core_flops - b.core_flops;
  return std::sqrt(dm * dm + dc * dc);
}

double centroid_similarity(const DeviceGroup& g, const DeviceProfile& d) {
  const double dm = g.centroid_mem - d.mem_bytes;
  const double dc = g.centroid_core - d.core_flops;
  return std::sqrt(dm * dm + dc * dc);
}

double group_outage_product(const DeviceGroup& g,
                            const std::vector<DeviceProfile>& devices) {
  double product = 1.0;
  for (const auto& id : g.members) product *= device_by_id(devices, id).p_out;
  return product;
}

namespace {

struct Axis {
  double offset = 0.0;
  double scale = 1.0;  // 0 collapses the axis (all devices equal on it)
  double map(double v) const { return scale == 0.0 ? 0.0 : (v - offset) / scale; }
};

struct WorkGroup {
  std::vector<std::size_t> members;
  double sum_mem = 0.0, sum_core = 0.0;  // in clustering coordinates
  double product = 1.0;
};

}  // namespace

std::vector<DeviceGroup> group_devices(const std::vector<DeviceProfile>& devices,
                                       const PlannerConfig& cfg,
                                       GroupingTrace* trace) {
  if (devices.empty()) throw ValidationError("group_devices: empty device set");
  validate_config(cfg);

  Axis mem_axis, core_axis;
  if (cfg.normalize_capacity) {
    double mem_lo = devices[0].mem_bytes, mem_hi = devices[0].mem_bytes;
    double core_lo = devices[0].core_flops, core_hi = devices[0].core_flops;
    for (const auto& d : devices) {
      mem_lo = std::min(mem_lo, d.mem_bytes);
      mem_hi = std::max(mem_hi, d.mem_bytes);
      core_lo = std::min(core_lo, d.core_flops);
      core_hi = std::max(core_hi, d.core_flops);
    }
    mem_axis = {mem_lo, mem_hi - mem_lo};
    core_axis = {core_lo, core_hi - core_lo};
  }
  auto coord_mem = [&](std::size_t i) { return mem_axis.map(devices[i].mem_bytes); };
  auto coord_core = [&](std::size_t i) { return core_axis.map(devices[i].core_flops); };

  Rng rng(cfg.seed);
  const std::size_t leader = next_index(rng, devices.size());

  std::vector<WorkGroup> groups;
  groups.push_back({{leader}, coord_mem(leader), coord_core(leader), devices[leader].p_out});
  if (trace) {
    trace->leader_index = leader;
    trace->events.push_back({devices[leader].id, 0, true, 0.0, 1.0});
  }

  for (std::size_t i = 0; i < devices.size(); ++i) {
    if (i == leader) continue;
    bool placed = false;
    for (std::size_t k = 0; k < groups.size() && !placed; ++k) {
      WorkGroup& g = groups[k];
      if (g.product <= cfg.p_th) continue;  // group already reliable
      const double n = static_cast<double>(g.members.size());
      const double dm = g.sum_mem / n - coord_mem(i);
      const double dc = g.sum_core / n - coord_core(i);
      const double dist = std::sqrt(dm * dm + dc * dc);
      if (dist > cfg.d_th) continue;
      if (trace)
        trace->events.push_back({devices[i].id, static_cast<int>(k), false, dist, g.product});
      g.members.push_back(i);
      g.sum_mem += coord_mem(i);
      g.sum_core += coord_core(i);
      g.product *= devices[i].p_out;
      placed = true;
    }
    if (!placed) {
      if (trace)
        trace->events.push_back({devices[i].id, static_cast<int>(groups.size()), true, 0.0, 1.0});
      groups.push_back({{i}, coord_mem(i), coord_core(i), devices[i].p_out});
    }
  }

  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].product > cfg.p_th)
      throw InfeasibleError(
          "grouping", "group " + std::to_string(k) + " outage product " +
                          std::to_string(groups[k].product) + " exceeds p_th " +
                          std::to_string(cfg.p_th) +
                          "; p_th is too strict for the available devices");
  }

  std::vector<DeviceGroup> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    DeviceGroup dg;
    double sum_mem = 0.0, sum_core = 0.0;
    for (std::size_t i : g.members) {
      dg.members.push_back(devices[i].id);
      sum_mem += devices[i].mem_bytes;
      sum_core += devices[i].core_flops;
    }
    const double n = static_cast<double>(g.members.size());
    dg.centroid_mem = sum_mem / n;
    dg.centroid_core = sum_core / n;
    out.push_back(std::move(dg));
  }
  return out;
}

}  // namespace rocoin
