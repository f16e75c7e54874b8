#include "rocoin/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rocoin/errors.hpp"

namespace rocoin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double group_min_mem(const DeviceGroup& g, const std::vector<DeviceProfile>& devices) {
  double min_mem = std::numeric_limits<double>::infinity();
  for (const auto& id : g.members)
    min_mem = std::min(min_mem, device_by_id(devices, id).mem_bytes);
  return min_mem;
}

double student_score(const DeviceGroup& g, const StudentArch& s, double size,
                     const std::vector<DeviceProfile>& devices) {
  return s.flops / (size * group_delay(g, s, devices));
}

}  // namespace

std::vector<StudentArch> feasible_students(const DeviceGroup& g,
                                           const std::vector<StudentArch>& students,
                                           const std::vector<DeviceProfile>& devices) {
  const double min_mem = group_min_mem(g, devices);
  std::vector<StudentArch> out;
  for (const auto& s : students)
    if (s.param_bytes <= min_mem) out.push_back(s);
  return out;
}

double partition_size(const FilterPartition& p, const FilterGraph& g,
                      PartitionSizeMetric metric) {
  if (p.members.empty()) throw ValidationError("partition_size: empty partition");
  if (metric == PartitionSizeMetric::filter_count)
    return static_cast<double>(p.members.size());
  const double vol = volume(g, p.members);
  if (vol <= 0.0)
    throw ValidationError("partition_size: partition has zero volume");
  return vol;
}

double group_delay(const DeviceGroup& g, const StudentArch& s,
                   const std::vector<DeviceProfile>& devices) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& id : g.members) {
    const DeviceProfile& d = device_by_id(devices, id);
    best = std::min(best, s.flops / d.core_flops + s.output_bits / d.tran_bps);
  }
  return best;
}

double assignment_weight(const DeviceGroup& g, const FilterPartition& p,
                         const std::vector<StudentArch>& feasible,
                         const FilterGraph& graph,
                         const std::vector<DeviceProfile>& devices,
                         PartitionSizeMetric metric) {
  if (feasible.empty()) return kNegInf;
  const double size = partition_size(p, graph, metric);
  double best = kNegInf;
  for (const auto& s : feasible)
    best = std::max(best, student_score(g, s, size, devices));
  return best;
}

Matrix build_weight_matrix(const std::vector<DeviceGroup>& groups,
                           const std::vector<FilterPartition>& partitions,
                           const std::vector<StudentArch>& students,
                           const std::vector<DeviceProfile>& devices,
                           const FilterGraph& graph, PartitionSizeMetric metric) {
  if (groups.size() != partitions.size())
    throw ValidationError("build_weight_matrix: group and partition counts differ");
  const std::size_t k = groups.size();
  Matrix w(k, k, kNegInf);
  for (std::size_t gi = 0; gi < k; ++gi) {
    const auto feasible = feasible_students(groups[gi], students, devices);
    for (std::size_t pi = 0; pi < k; ++pi)
      w(gi, pi) = assignment_weight(groups[gi], partitions[pi], feasible, graph,
                                    devices, metric);
  }
  return w;
}

namespace {

// Min-cost perfect assignment via shortest augmenting paths with potentials.
// Returns row -> column; costs must be finite.
std::vector<int> hungarian_min(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(static_cast<std::size_t>(i0 - 1),
                                static_cast<std::size_t>(j - 1)) -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> match(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0)
      match[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return match;
}

struct MaxMatch {
  std::vector<int> match;
  double total = kNegInf;  // -inf when no perfect matching avoids forbidden edges
};

// Maximum-weight matching on a matrix with -inf entries; forbidden edges
// get a finite penalty cost large enough that any matching using one loses
// to every matching that does not.
MaxMatch hungarian_max(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  MaxMatch result;
  if (n == 0) {
    result.total = 0.0;
    return result;
  }
  double max_abs = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j)
      if (std::isfinite(w(i, j))) max_abs = std::max(max_abs, std::abs(w(i, j)));
  const double forbidden = (2.0 * n + 1.0) * (max_abs + 1.0);
  Matrix cost(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j)
      cost(i, j) = std::isfinite(w(i, j)) ? -w(i, j) : forbidden;
  std::vector<int> match = hungarian_min(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) {
    const double entry = w(i, static_cast<std::size_t>(match[i]));
    if (!std::isfinite(entry)) return result;  // total stays -inf
    total += entry;
  }
  result.match = std::move(match);
  result.total = total;
  return result;
}

Matrix submatrix(const Matrix& w, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  Matrix sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      sub(i, j) = w(static_cast<std::size_t>(rows[i]), static_cast<std::size_t>(cols[j]));
  return sub;
}

}  // namespace

std::vector<int> km_match(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  if (w.cols() != w.rows()) throw ValidationError("km_match: matrix not square");
  if (n == 0) return {};

  MaxMatch opt = hungarian_max(w);
  if (!std::isfinite(opt.total))
    throw InfeasibleError("matching",
                          "no perfect group-partition matching with feasible students");

  // Fix rows in order to the smallest column that still reaches the
  // optimal total, so ties resolve to the lexicographically smallest
  // assignment vector.
  std::vector<int> result(static_cast<std::size_t>(n), -1);
  std::vector<int> free_cols(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) free_cols[static_cast<std::size_t>(j)] = j;
  double target = opt.total;
  double prefix = 0.0;

  for (int i = 0; i < n; ++i) {
    std::vector<int> tail_rows;
    for (int r = i + 1; r < n; ++r) tail_rows.push_back(r);
    const double eps = 1e-9 * std::max(1.0, std::abs(target));

    int fallback_col = -1;
    double fallback_total = kNegInf;
    bool committed = false;
    for (std::size_t ci = 0; ci < free_cols.size() && !committed; ++ci) {
      const int c = free_cols[ci];
      const double entry = w(static_cast<std::size_t>(i), static_cast<std::size_t>(c));
      if (!std::isfinite(entry)) continue;
      std::vector<int> tail_cols;
      for (int fc : free_cols)
        if (fc != c) tail_cols.push_back(fc);
      double tail_total = 0.0;
      if (!tail_rows.empty()) {
        MaxMatch sub = hungarian_max(submatrix(w, tail_rows, tail_cols));
        tail_total = sub.total;
      }
      const double achieved = prefix + entry + tail_total;
      if (achieved >= target - eps) {
        result[static_cast<std::size_t>(i)] = c;
        prefix += entry;
        target = achieved;
        free_cols.erase(free_cols.begin() + static_cast<std::ptrdiff_t>(ci));
        committed = true;
      } else if (achieved > fallback_total) {
        fallback_total = achieved;
        fallback_col = c;
      }
    }
    if (!committed) {
      result[static_cast<std::size_t>(i)] = fallback_col;
      prefix += w(static_cast<std::size_t>(i), static_cast<std::size_t>(fallback_col));
      target = fallback_total;
      free_cols.erase(std::find(free_cols.begin(), free_cols.end(), fallback_col));
    }
  }
  return result;
}

std::string select_student(const DeviceGroup& g, const FilterPartition& p,
                           const std::vector<StudentArch>& feasible,
                           const FilterGraph& graph,
                           const std::vector<DeviceProfile>& devices,
                           PartitionSizeMetric metric) {
  if (feasible.empty())
    throw InfeasibleError("matching", "no feasible student for group");
  const double size = partition_size(p, graph, metric);
  const StudentArch* best = nullptr;
  double best_score = kNegInf;
  for (const auto& s : feasible) {
    const double score = student_score(g, s, size, devices);
    bool better = score > best_score;
    if (!better && score == best_score && best != nullptr) {
      if (s.param_bytes < best->param_bytes ||
          (s.param_bytes == best->param_bytes && s.id < best->id))
        better = true;
    }
    if (better) {
      best_score = score;
      best = &s;
    }
  }
  return best->id;
}

}  // namespace rocoin
