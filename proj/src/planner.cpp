#include "rocoin/planner.hpp"

#include <algorithm>
#include <string>

#include "rocoin/assignment.hpp"
#include "rocoin/errors.hpp"
#include "rocoin/grouping.hpp"
#include "rocoin/spectral.hpp"

namespace rocoin {

AssignmentPlan make_plan(const std::vector<DeviceProfile>& devices,
                         const ActivationMatrix& acts,
                         const std::vector<StudentArch>& students,
                         const PlannerConfig& cfg) {
  validate_devices(devices);
  validate_students(students);
  validate_config(cfg);
  validate_activations(acts);
  if (students.empty()) throw ValidationError("make_plan: empty student catalog");

  AssignmentPlan plan;
  plan.groups = group_devices(devices, cfg);
  const int k = static_cast<int>(plan.groups.size());
  const int m = acts.filter_count();
  if (k > m)
    throw InfeasibleError("partitioning",
                          "device grouping produced " + std::to_string(k) +
                              " groups but only " + std::to_string(m) +
                              " filters are available to partition");

  const FilterGraph graph = build_filter_graph(acts);
  plan.partitions = partition_filters(graph, k, cfg);

  const Matrix w = build_weight_matrix(plan.groups, plan.partitions, students,
                                       devices, graph, cfg.partition_size_metric);
  plan.matching = km_match(w);

  plan.student_choice.resize(static_cast<std::size_t>(k));
  for (int gi = 0; gi < k; ++gi) {
    const auto feasible = feasible_students(plan.groups[static_cast<std::size_t>(gi)],
                                            students, devices);
    plan.student_choice[static_cast<std::size_t>(gi)] = select_student(
        plan.groups[static_cast<std::size_t>(gi)],
        plan.partitions[static_cast<std::size_t>(plan.matching[static_cast<std::size_t>(gi)])],
        feasible, graph, devices, cfg.partition_size_metric);
  }

  plan.predicted_latency_s = plan_latency(plan, devices, students);

  const ConstraintReport report = validate_plan(plan, devices, students, m, cfg);
  if (!report.all_pass()) {
    std::string failed;
    for (const auto& c : report.checks)
      if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.name + " (" + c.detail + ")";
    throw ValidationError("make_plan: planned output violates constraints: " + failed);
  }
  return plan;
}

double plan_latency(const AssignmentPlan& plan,
                    const std::vector<DeviceProfile>& devices,
                    const std::vector<StudentArch>& students) {
  double latency = 0.0;
  for (std::size_t k = 0; k < plan.groups.size(); ++k) {
    const StudentArch& s = student_by_id(students, plan.student_choice[k]);
    latency = std::max(latency, group_delay(plan.groups[k], s, devices));
  }
  return latency;
}

}  // namespace rocoin
