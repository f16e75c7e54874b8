#pragma once

#include <vector>

#include "rocoin/activation_graph.hpp"
#include "rocoin/matrix.hpp"
#include "rocoin/types.hpp"

namespace rocoin {

/// Students whose parameter footprint fits every member of the group
/// (param_bytes <= min member mem_bytes; the bound is inclusive).
std::vector<StudentArch> feasible_students(const DeviceGroup& g,
                                           const std::vector<StudentArch>& students,
                                           const std::vector<DeviceProfile>& devices);

/// Size of a knowledge partition: its filter count, or its graph volume.
double partition_size(const FilterPartition& p, const FilterGraph& g,
                      PartitionSizeMetric metric);

/// Completion time of a group running student s: the fastest member
/// defines it, since every member computes the same replica.
double group_delay(const DeviceGroup& g, const StudentArch& s,
                   const std::vector<DeviceProfile>& devices);

/// Edge weight between a device group and a knowledge partition: the best
/// achievable size-normalized compute-per-delay over the group's feasible
/// students. -infinity when no student fits.
double assignment_weight(const DeviceGroup& g, const FilterPartition& p,
                         const std::vector<StudentArch>& feasible,
                         const FilterGraph& graph,
                         const std::vector<DeviceProfile>& devices,
                         PartitionSizeMetric metric);

/// K x K weight matrix, entry (k, k') = assignment_weight of group k and
/// partition k'.
Matrix build_weight_matrix(const std::vector<DeviceGroup>& groups,
                           const std::vector<FilterPartition>& partitions,
                           const std::vector<StudentArch>& students,
                           const std::vector<DeviceProfile>& devices,
                           const FilterGraph& graph, PartitionSizeMetric metric);

/// Maximum-total-weight perfect matching over a square matrix that may
/// contain -infinity entries. Returns matching[row] = column. Ties break
/// toward the lexicographically smallest assignment vector. Throws
/// InfeasibleError("matching", ...) when every perfect matching touches a
/// -infinity entry.
std::vector<int> km_match(const Matrix& w);

/// Best student for a matched (group, partition) pair; ties go to the
/// smaller footprint, then the lexicographically smaller id. Throws
/// InfeasibleError on an empty feasible set.
std::string select_student(const DeviceGroup& g, const FilterPartition& p,
                           const std::vector<StudentArch>& feasible,
                           const FilterGraph& graph,
                           const std::vector<DeviceProfile>& devices,
                           PartitionSizeMetric metric);

}  // namespace rocoin
