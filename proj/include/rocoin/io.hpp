#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rocoin/activation_graph.hpp"
#include "rocoin/failure_sim.hpp"
#include "rocoin/types.hpp"

namespace rocoin {

// All writers emit canonical output: fixed key order and every number
// formatted to 12 significant digits, so identical inputs and seeds give
// byte-identical files on any platform.

/// 12-significant-digit canonical number rendering shared by JSON and CSV.
std::string format_number(double v);

std::vector<DeviceProfile> load_devices(const std::string& path);
void save_devices(const std::string& path, const std::vector<DeviceProfile>& devices);

std::vector<StudentArch> load_students(const std::string& path);
void save_students(const std::string& path, const std::vector<StudentArch>& students);

/// CSV with header `sample,f1,...,fM`; one row per validation sample.
/// Parse errors name the offending row and column.
ActivationMatrix load_activations(const std::string& path);
void save_activations(const std::string& path, const ActivationMatrix& acts);

/// plan.json round-trips the full AssignmentPlan. The constraint report is
/// carried as metadata and regenerated by whoever writes the plan.
AssignmentPlan load_plan(const std::string& path);
void save_plan(const std::string& path, const AssignmentPlan& plan,
               const ConstraintReport& report);

SimReport load_report(const std::string& path);
void save_report_json(const std::string& path, const SimReport& report,
                      const FailureScenario& scenario);
void save_report_csv(const std::string& path, const SimReport& report);

/// Edge-list export of a filter graph: header `filter_i,filter_j,weight`,
/// one row per unordered pair i < j.
void save_edge_list(const std::string& path, const FilterGraph& g);

/// Synthetic activity matrix with class-planted structure: the filters are
/// split into `classes` contiguous blocks and each class's samples activate
/// its own block at a high level (`sharpness`) and the rest near 1.
ActivationMatrix synth_activations(int filters, int classes, int samples_per_class,
                                   double sharpness, std::uint64_t seed);

/// Device generator for the default evaluation setup: compute rate uniform
/// in [5, 30] MFLOP/s, transmit rate uniform in [0.5, 1] kbit/s, memory
/// uniform in [0.5, 1.5] MB. Outage probabilities are drawn uniformly
/// around mean (1 - success_mean) with half-width min(mean, 1-mean)/2.
std::vector<DeviceProfile> synth_devices(int n, double success_mean, std::uint64_t seed);

/// Fixed student catalogs. "paper-cifar" is a three-model catalog sized
/// like small CIFAR-10 classifiers; "paper-cifar100" like CIFAR-100 ones.
std::vector<StudentArch> synth_students(const std::string& preset);

}  // namespace rocoin
