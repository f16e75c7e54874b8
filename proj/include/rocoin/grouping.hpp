#pragma once

#include <cstddef>
#include <vector>

#include "rocoin/types.hpp"

namespace rocoin {

/// Euclidean distance between two devices in the (mem_bytes, core_flops)
/// plane. Symmetric, zero iff the capacities coincide.
double capacity_similarity(const DeviceProfile& a, const DeviceProfile& b);

/// Distance between a group's centroid and a candidate device.
double centroid_similarity(const DeviceGroup& g, const DeviceProfile& d);

/// Product of members' outage probabilities: the chance the whole group
/// fails to deliver its output in one round.
double group_outage_product(const DeviceGroup& g,
                            const std::vector<DeviceProfile>& devices);

/// One join decision, recorded so tests can replay the run.
struct JoinEvent {
  std::string device_id;
  int group_index = -1;       // group joined, or founded when founded=true
  bool founded = false;
  double distance = 0.0;      // centroid distance at join time (0 for founders)
  double product_before = 0.0;  // group outage product before the join (1 for founders)
};

struct GroupingTrace {
  std::size_t leader_index = 0;  // input position of the seeded first leader
  std::vector<JoinEvent> events;
};

/// Follow-the-leader device grouping.
///
/// The seed picks the first leader; the remaining devices are scanned in
/// input order. A device joins the first group whose centroid lies within
/// d_th and whose outage product is still above p_th (the group still needs
/// redundancy); otherwise it founds a new group. Centroids are recomputed
/// after every join. Throws InfeasibleError("grouping", ...) if any final
/// group ends with outage product above p_th.
std::vector<DeviceGroup> group_devices(const std::vector<DeviceProfile>& devices,
                                       const PlannerConfig& cfg,
                                       GroupingTrace* trace = nullptr);

}  // namespace rocoin
