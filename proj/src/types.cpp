#include "rocoin/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "rocoin/errors.hpp"
#include "rocoin/grouping.hpp"

namespace rocoin {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

std::vector<DeviceProfile> validate_devices(std::vector<DeviceProfile> devices) {
  std::unordered_set<std::string> seen;
  for (const auto& d : devices) {
    if (!seen.insert(d.id).second)
      throw ValidationError("duplicate device id: " + d.id);
    if (!positive_finite(d.core_flops))
      throw ValidationError("device " + d.id + ": core_flops must be > 0");
    if (!positive_finite(d.mem_bytes))
      throw ValidationError("device " + d.id + ": mem_bytes must be > 0");
    if (!positive_finite(d.tran_bps))
      throw ValidationError("device " + d.id + ": tran_bps must be > 0");
    if (!(std::isfinite(d.p_out) && d.p_out >= 0.0 && d.p_out <= 1.0))
      throw ValidationError("device " + d.id + ": p_out must lie in [0,1]");
  }
  return devices;
}

std::vector<StudentArch> validate_students(std::vector<StudentArch> students) {
  std::unordered_set<std::string> seen;
  for (const auto& s : students) {
    if (!seen.insert(s.id).second)
      throw ValidationError("duplicate student id: " + s.id);
    if (!positive_finite(s.flops))
      throw ValidationError("student " + s.id + ": flops must be > 0");
    if (!positive_finite(s.param_bytes))
      throw ValidationError("student " + s.id + ": param_bytes must be > 0");
    if (!positive_finite(s.output_bits))
      throw ValidationError("student " + s.id + ": output_bits must be > 0");
  }
  return students;
}

void validate_config(const PlannerConfig& cfg) {
  if (!positive_finite(cfg.d_th))
    throw ValidationError("config: d_th must be > 0");
  if (!(std::isfinite(cfg.p_th) && cfg.p_th > 0.0 && cfg.p_th <= 1.0))
    throw ValidationError("config: p_th must lie in (0,1]");
  if (!positive_finite(cfg.eigen_tolerance))
    throw ValidationError("config: eigen_tolerance must be > 0");
  if (cfg.kmeans_restarts < 1)
    throw ValidationError("config: kmeans_restarts must be >= 1");
  if (cfg.kmeans_max_iters < 1)
    throw ValidationError("config: kmeans_max_iters must be >= 1");
}

const DeviceProfile& device_by_id(const std::vector<DeviceProfile>& devices,
                                  const std::string& id) {
  for (const auto& d : devices)
    if (d.id == id) return d;
  throw ValidationError("unknown device id: " + id);
}

const StudentArch& student_by_id(const std::vector<StudentArch>& students,
                                 const std::string& id) {
  for (const auto& s : students)
    if (s.id == id) return s;
  throw ValidationError("unknown student id: " + id);
}

ConstraintReport validate_plan(const AssignmentPlan& plan,
                               const std::vector<DeviceProfile>& devices,
                               const std::vector<StudentArch>& students,
                               int filter_count, const PlannerConfig& cfg) {
  const std::size_t k_count = plan.groups.size();
  if (plan.partitions.size() != k_count || plan.matching.size() != k_count ||
      plan.student_choice.size() != k_count)
    throw ValidationError("plan: groups, partitions, matching and student_choice must all have length K");

  // Resolve every reference up front; dangling ids are errors, not report rows.
  std::unordered_map<std::string, const DeviceProfile*> dev_index;
  for (const auto& d : devices) dev_index[d.id] = &d;
  for (const auto& g : plan.groups)
    for (const auto& id : g.members)
      if (!dev_index.count(id)) throw ValidationError("plan references unknown device id: " + id);
  for (const auto& sid : plan.student_choice)
    (void)student_by_id(students, sid);
  for (const auto& p : plan.partitions)
    for (int f : p.members)
      if (f < 0 || f >= filter_count)
        throw ValidationError("plan references filter index out of range: " + std::to_string(f));
  {
    std::set<int> matched(plan.matching.begin(), plan.matching.end());
    if (matched.size() != k_count || (k_count > 0 && (*matched.begin() < 0 ||
        *matched.rbegin() >= static_cast<int>(k_count))))
      throw ValidationError("plan: matching is not a bijection on {0..K-1}");
  }

  ConstraintReport report;

  // Device coverage and disjointness.
  std::unordered_map<std::string, int> dev_uses;
  for (const auto& g : plan.groups)
    for (const auto& id : g.members) dev_uses[id]++;
  {
    std::vector<std::string> missing;
    for (const auto& d : devices)
      if (!dev_uses.count(d.id)) missing.push_back(d.id);
    report.checks.push_back({"device-coverage", missing.empty(),
                             missing.empty() ? "" : "unassigned devices: " + join(missing)});
    std::vector<std::string> dup;
    for (const auto& [id, n] : dev_uses)
      if (n > 1) dup.push_back(id);
    report.checks.push_back({"device-disjoint", dup.empty(),
                             dup.empty() ? "" : "devices in more than one group: " + join(dup)});
  }

  // Filter coverage and disjointness.
  {
    std::vector<int> uses(static_cast<std::size_t>(filter_count), 0);
    for (const auto& p : plan.partitions)
      for (int f : p.members) uses[static_cast<std::size_t>(f)]++;
    std::vector<std::string> missing, dup;
    for (int f = 0; f < filter_count; ++f) {
      if (uses[static_cast<std::size_t>(f)] == 0) missing.push_back(std::to_string(f));
      if (uses[static_cast<std::size_t>(f)] > 1) dup.push_back(std::to_string(f));
    }
    report.checks.push_back({"filter-coverage", missing.empty(),
                             missing.empty() ? "" : "uncovered filters: " + join(missing)});
    report.checks.push_back({"filter-disjoint", dup.empty(),
                             dup.empty() ? "" : "filters in more than one partition: " + join(dup)});
  }

  // Group outage product against p_th.
  {
    std::vector<std::string> bad;
    for (std::size_t k = 0; k < k_count; ++k) {
      if (group_outage_product(plan.groups[k], devices) > cfg.p_th)
        bad.push_back("group " + std::to_string(k));
    }
    report.checks.push_back({"group-outage", bad.empty(),
                             bad.empty() ? "" : "outage product above p_th: " + join(bad)});
  }

  // Chosen student fits the group's tightest memory budget.
  {
    std::vector<std::string> bad;
    for (std::size_t k = 0; k < k_count; ++k) {
      const StudentArch& s = student_by_id(students, plan.student_choice[k]);
      double min_mem = std::numeric_limits<double>::infinity();
      for (const auto& id : plan.groups[k].members)
        min_mem = std::min(min_mem, dev_index.at(id)->mem_bytes);
      if (s.param_bytes > min_mem)
        bad.push_back("group " + std::to_string(k) + " (student " + s.id + ")");
    }
    report.checks.push_back({"memory-fit", bad.empty(),
                             bad.empty() ? "" : "student exceeds group memory: " + join(bad)});
  }

  return report;
}

}  // namespace rocoin
