#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rocoin/errors.hpp"

namespace rocoin::oracles {

namespace {

// Enumerates set partitions as restricted growth strings: label[0] = 0 and
// each later label is at most one above the largest label before it. Calls
// visit(labels, block_count) for every partition of n items.
template <typename Visit>
void partition_rec(int i, int n, std::vector<int>& labels, int max_label, Visit& visit) {
  if (i == n) {
    visit(const_cast<const std::vector<int>&>(labels), max_label + 1);
    return;
  }
  for (int l = 0; l <= max_label + 1; ++l) {
    labels[static_cast<std::size_t>(i)] = l;
    partition_rec(i + 1, n, labels, std::max(max_label, l), visit);
  }
}

template <typename Visit>
void for_each_set_partition(int n, Visit&& visit) {
  if (n == 0) return;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  partition_rec(0, n, labels, -1, visit);
}

std::vector<FilterPartition> labels_to_partitions(const std::vector<int>& labels,
                                                  int blocks) {
  std::vector<FilterPartition> parts(static_cast<std::size_t>(blocks));
  for (std::size_t i = 0; i < labels.size(); ++i)
    parts[static_cast<std::size_t>(labels[i])].members.push_back(static_cast<int>(i));
  return parts;
}

}  // namespace

NcutResult exhaustive_min_ncut(const FilterGraph& g, int k) {
  const int m = g.filter_count;
  if (m > 12 || k > 3)
    throw ValidationError("exhaustive_min_ncut: instance too large (M <= 12, K <= 3)");
  if (k < 1 || k > m) throw ValidationError("exhaustive_min_ncut: K must lie in [1, M]");

  NcutResult best;
  best.value = std::numeric_limits<double>::infinity();
  for_each_set_partition(m, [&](const std::vector<int>& labels, int blocks) {
    if (blocks != k) return;
    auto parts = labels_to_partitions(labels, blocks);
    const double value = ncut_value(g, parts);
    if (value < best.value) {
      best.value = value;
      best.partitions = std::move(parts);
    }
  });
  return best;
}

double matching_total(const Matrix& w, const std::vector<int>& match) {
  double total = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i)
    total += w(i, static_cast<std::size_t>(match[i]));
  return total;
}

std::vector<int> brute_force_match(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  if (w.cols() != w.rows()) throw ValidationError("brute_force_match: matrix not square");
  if (n > 8) throw ValidationError("brute_force_match: K <= 8 required");
  if (n == 0) return {};

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  double best_total = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    bool finite = true;
    for (int i = 0; i < n && finite; ++i) {
      const double entry = w(static_cast<std::size_t>(i),
                             static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]));
      if (!std::isfinite(entry))
        finite = false;
      else
        total += entry;
    }
    // Lexicographic enumeration: strict improvement keeps the first (and
    // therefore smallest) assignment vector among ties.
    if (finite && total > best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (best.empty())
    throw InfeasibleError("matching", "every perfect matching hits a forbidden pair");
  return best;
}

AssignmentPlan brute_force_plan(const std::vector<DeviceProfile>& devices,
                                const ActivationMatrix& acts,
                                const std::vector<StudentArch>& students,
                                const PlannerConfig& cfg) {
  const int n = static_cast<int>(devices.size());
  const int m = acts.filter_count();
  if (n > 5 || m > 6 || students.size() > 3)
    throw ValidationError("brute_force_plan: instance too large (N <= 5, M <= 6, J <= 3)");
  if (n == 0) throw ValidationError("brute_force_plan: empty device set");

  struct Best {
    double latency = std::numeric_limits<double>::infinity();
    std::vector<int> labels;
    int blocks = 0;
    std::vector<std::string> choice;
  } best;
  bool any_grouping = false;

  for_each_set_partition(n, [&](const std::vector<int>& labels, int blocks) {
    if (blocks > m) return;
    std::vector<double> product(static_cast<std::size_t>(blocks), 1.0);
    std::vector<double> min_mem(static_cast<std::size_t>(blocks),
                                std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
      const auto b = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
      product[b] *= devices[static_cast<std::size_t>(i)].p_out;
      min_mem[b] = std::min(min_mem[b], devices[static_cast<std::size_t>(i)].mem_bytes);
    }
    for (double p : product)
      if (p > cfg.p_th) return;
    any_grouping = true;

    // Per block, the latency-minimal feasible student; choices are
    // independent because the objective is a max of per-block minima.
    double latency = 0.0;
    std::vector<std::string> choice(static_cast<std::size_t>(blocks));
    for (int b = 0; b < blocks; ++b) {
      double block_best = std::numeric_limits<double>::infinity();
      const StudentArch* pick = nullptr;
      for (const auto& s : students) {
        if (s.param_bytes > min_mem[static_cast<std::size_t>(b)]) continue;
        double delay = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
          if (labels[static_cast<std::size_t>(i)] != b) continue;
          const auto& d = devices[static_cast<std::size_t>(i)];
          delay = std::min(delay, s.flops / d.core_flops + s.output_bits / d.tran_bps);
        }
        if (delay < block_best) {
          block_best = delay;
          pick = &s;
        }
      }
      if (pick == nullptr) return;  // no student fits this block
      choice[static_cast<std::size_t>(b)] = pick->id;
      latency = std::max(latency, block_best);
    }
    if (latency < best.latency) {
      best.latency = latency;
      best.labels = labels;
      best.blocks = blocks;
      best.choice = std::move(choice);
    }
  });

  if (best.blocks == 0) {
    if (!any_grouping)
      throw InfeasibleError("grouping", "no device partition meets the outage threshold");
    throw InfeasibleError("matching", "no feasible student for some group in every partition");
  }

  AssignmentPlan plan;
  for (int b = 0; b < best.blocks; ++b) {
    DeviceGroup g;
    double sum_mem = 0.0, sum_core = 0.0;
    for (int i = 0; i < n; ++i) {
      if (best.labels[static_cast<std::size_t>(i)] != b) continue;
      g.members.push_back(devices[static_cast<std::size_t>(i)].id);
      sum_mem += devices[static_cast<std::size_t>(i)].mem_bytes;
      sum_core += devices[static_cast<std::size_t>(i)].core_flops;
    }
    g.centroid_mem = sum_mem / static_cast<double>(g.members.size());
    g.centroid_core = sum_core / static_cast<double>(g.members.size());
    plan.groups.push_back(std::move(g));
  }
  for (int b = 0; b < best.blocks; ++b) {
    FilterPartition p;
    const int lo = b * m / best.blocks;
    const int hi = (b + 1) * m / best.blocks;
    for (int f = lo; f < hi; ++f) p.members.push_back(f);
    plan.partitions.push_back(std::move(p));
    plan.matching.push_back(b);
  }
  plan.student_choice = best.choice;
  plan.predicted_latency_s = best.latency;
  return plan;
}

}  // namespace rocoin::oracles
