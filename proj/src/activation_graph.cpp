#include "rocoin/activation_graph.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <unordered_set>

#include "rocoin/errors.hpp"

namespace rocoin {

void validate_activations(const ActivationMatrix& acts) {
  if (acts.filter_count() < 2)
    throw ValidationError("activations: need at least 2 filters, got " +
                          std::to_string(acts.filter_count()));
  if (acts.sample_count() < 1)
    throw ValidationError("activations: need at least 1 sample");
  for (std::size_t v = 0; v < acts.values.rows(); ++v)
    for (std::size_t m = 0; m < acts.values.cols(); ++m) {
      const double a = acts.values(v, m);
      if (!std::isfinite(a) || a < 0.0)
        throw ValidationError("activations: entry (" + std::to_string(v) + "," +
                              std::to_string(m) + ") must be finite and >= 0");
    }
}

FilterGraph build_filter_graph(const ActivationMatrix& acts) {
  validate_activations(acts);
  const std::size_t filters = acts.values.cols();
  const std::size_t samples = acts.values.rows();

  FilterGraph g;
  g.filter_count = static_cast<int>(filters);
  g.weights = Matrix(filters, filters, 0.0);
  for (std::size_t m = 0; m < filters; ++m) {
    for (std::size_t n = m + 1; n < filters; ++n) {
      double w = 0.0;
      for (std::size_t v = 0; v < samples; ++v) {
        const double am = acts.values(v, m);
        const double an = acts.values(v, n);
        w += am * an * std::abs(am - an);
      }
      g.weights(m, n) = w;
      g.weights(n, m) = w;
    }
  }
  g.degrees.assign(filters, 0.0);
  for (std::size_t m = 0; m < filters; ++m) {
    double z = 0.0;
    for (std::size_t n = 0; n < filters; ++n) z += g.weights(m, n);
    g.degrees[m] = z;
  }
  return g;
}

namespace {

void check_filter_set(const FilterGraph& g, const std::vector<int>& p,
                      const char* what) {
  for (int f : p)
    if (f < 0 || f >= g.filter_count)
      throw ValidationError(std::string(what) + ": filter index out of range: " +
                            std::to_string(f));
}

}  // namespace

double cut_weight(const FilterGraph& g, const std::vector<int>& p,
                  const std::vector<int>& q) {
  check_filter_set(g, p, "cut_weight");
  check_filter_set(g, q, "cut_weight");
  std::unordered_set<int> in_p(p.begin(), p.end());
  for (int f : q)
    if (in_p.count(f))
      throw ValidationError("cut_weight: sets overlap at filter " + std::to_string(f));
  double w = 0.0;
  for (int a : p)
    for (int b : q) w += g.weights(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  return w;
}

double volume(const FilterGraph& g, const std::vector<int>& p) {
  check_filter_set(g, p, "volume");
  double v = 0.0;
  for (int f : p) v += g.degrees[static_cast<std::size_t>(f)];
  return v;
}

double ncut_value(const FilterGraph& g, const std::vector<FilterPartition>& partitions) {
  std::vector<char> seen(static_cast<std::size_t>(g.filter_count), 0);
  for (const auto& p : partitions) {
    check_filter_set(g, p.members, "ncut_value");
    for (int f : p.members) {
      if (seen[static_cast<std::size_t>(f)])
        throw ValidationError("ncut_value: partitions overlap at filter " + std::to_string(f));
      seen[static_cast<std::size_t>(f)] = 1;
    }
  }
  for (int f = 0; f < g.filter_count; ++f)
    if (!seen[static_cast<std::size_t>(f)])
      throw ValidationError("ncut_value: partitions do not cover filter " + std::to_string(f));

  double total = 0.0;
  for (std::size_t k = 0; k < partitions.size(); ++k) {
    const auto& p = partitions[k].members;
    std::vector<int> complement;
    complement.reserve(static_cast<std::size_t>(g.filter_count) - p.size());
    std::unordered_set<int> in_p(p.begin(), p.end());
    for (int f = 0; f < g.filter_count; ++f)
      if (!in_p.count(f)) complement.push_back(f);
    const double vol = volume(g, p);
    if (vol == 0.0)
      throw ValidationError("ncut_value: partition " + std::to_string(k) +
                            " has zero volume (isolated block)");
    total += cut_weight(g, p, complement) / vol;
  }
  return 0.5 * total;
}

}  // namespace rocoin
