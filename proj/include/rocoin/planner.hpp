#pragma once

#include <vector>

#include "rocoin/activation_graph.hpp"
#include "rocoin/types.hpp"

namespace rocoin {

/// Runs the full knowledge-assignment pipeline: device grouping (fixes K),
/// filter-graph construction and spectral partitioning into K parts,
/// group-partition matching and per-group student selection. The returned
/// plan carries its predicted completion latency and passes validate_plan.
///
/// Throws InfeasibleError naming the failing stage: "grouping" when some
/// group cannot meet the outage threshold, "partitioning" when K exceeds
/// the filter count, "matching" when no group-partition pairing has a
/// feasible student.
AssignmentPlan make_plan(const std::vector<DeviceProfile>& devices,
                         const ActivationMatrix& acts,
                         const std::vector<StudentArch>& students,
                         const PlannerConfig& cfg);

/// Completion latency of a plan: the slowest group bounds the round, and
/// within a group the fastest replica delivers.
double plan_latency(const AssignmentPlan& plan,
                    const std::vector<DeviceProfile>& devices,
                    const std::vector<StudentArch>& students);

}  // namespace rocoin
