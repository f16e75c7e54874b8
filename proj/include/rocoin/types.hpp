#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rocoin {

/// Resource profile of one edge device. p_out is the probability that the
/// device's contribution is lost in one inference round (crash or
/// transmission outage combined).
struct DeviceProfile {
  std::string id;
  double core_flops = 0.0;  // compute rate, FLOP/s
  double mem_bytes = 0.0;   // memory budget, bytes
  double tran_bps = 0.0;    // transmit rate, bit/s
  double p_out = 0.0;       // outage probability, in [0,1]

  bool operator==(const DeviceProfile&) const = default;
};

/// A candidate compressed model.
struct StudentArch {
  std::string id;
  double flops = 0.0;        // computation load per inference, FLOP
  double param_bytes = 0.0;  // parameter footprint, bytes
  double output_bits = 0.0;  // output size to transmit, bits

  bool operator==(const StudentArch&) const = default;
};

/// Devices that deploy the same student as replicas of each other.
/// centroid = arithmetic mean of members' (mem_bytes, core_flops).
struct DeviceGroup {
  std::vector<std::string> members;
  double centroid_mem = 0.0;
  double centroid_core = 0.0;

  bool operator==(const DeviceGroup&) const = default;
};

/// One cluster of the teacher's final-layer filters (0-based indices).
struct FilterPartition {
  std::vector<int> members;

  bool operator==(const FilterPartition&) const = default;
};

enum class PartitionSizeMetric { filter_count, volume };

struct PlannerConfig {
  double d_th = 0.0;   // capacity-similarity threshold for grouping
  double p_th = 0.25;  // cumulative group outage threshold, in (0,1]
  PartitionSizeMetric partition_size_metric = PartitionSizeMetric::filter_count;
  std::uint64_t seed = 0;
  int kmeans_restarts = 8;
  int kmeans_max_iters = 100;
  double eigen_tolerance = 1e-10;
  // Off by default: raw capacity units go into the similarity distance.
  bool normalize_capacity = false;
  // Off by default: k-means runs on raw eigenvector rows.
  bool normalize_embedding_rows = false;
};

/// Joint planning output. matching[k] is the partition index assigned to
/// group k; student_choice[k] is the student id deployed on group k.
struct AssignmentPlan {
  std::vector<DeviceGroup> groups;
  std::vector<FilterPartition> partitions;
  std::vector<int> matching;
  std::vector<std::string> student_choice;
  double predicted_latency_s = 0.0;

  std::size_t group_count() const { return groups.size(); }
};

struct ConstraintCheck {
  std::string name;    // e.g. "device-coverage"
  bool pass = false;
  std::string detail;  // violating entities, empty when pass
};

struct ConstraintReport {
  std::vector<ConstraintCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const ConstraintCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Checks per-device invariants and id uniqueness. Throws ValidationError
/// naming the offending device; returns its input otherwise.
std::vector<DeviceProfile> validate_devices(std::vector<DeviceProfile> devices);

/// Same contract as validate_devices, for the student catalog.
std::vector<StudentArch> validate_students(std::vector<StudentArch> students);

void validate_config(const PlannerConfig& cfg);

/// Checks a plan against the feasibility constraints: device coverage and
/// disjointness, filter coverage and disjointness over {0..M-1}, per-group
/// outage product <= p_th, and the chosen student's footprint against the
/// group's tightest memory budget. Dangling id references throw; everything
/// else is reported, not thrown.
ConstraintReport validate_plan(const AssignmentPlan& plan,
                               const std::vector<DeviceProfile>& devices,
                               const std::vector<StudentArch>& students,
                               int filter_count, const PlannerConfig& cfg);

const DeviceProfile& device_by_id(const std::vector<DeviceProfile>& devices,
                                  const std::string& id);
const StudentArch& student_by_id(const std::vector<StudentArch>& students,
                                 const std::string& id);

}  // namespace rocoin
