#pragma once

#include <vector>

#include "rocoin/matrix.hpp"
#include "rocoin/types.hpp"

namespace rocoin {

/// Per-sample average-activity statistics: one row per validation sample,
/// one column per final-layer filter.
struct ActivationMatrix {
  Matrix values;  // V x M, entries finite and >= 0

  int sample_count() const { return static_cast<int>(values.rows()); }
  int filter_count() const { return static_cast<int>(values.cols()); }
};

/// Throws ValidationError unless all entries are finite and >= 0,
/// M >= 2 and V >= 1.
void validate_activations(const ActivationMatrix& acts);

/// Weighted graph over filters. weights is symmetric with zero diagonal;
/// degrees[m] is the row sum of weights.
struct FilterGraph {
  int filter_count = 0;
  Matrix weights;
  std::vector<double> degrees;
};

/// Builds the filter-activation graph. The weight of edge (m, m') sums
/// a_m * a_m' * |a_m - a_m'| over validation samples, so it is large between
/// strongly active filters of unequal importance and zero between filters
/// with identical activity.
FilterGraph build_filter_graph(const ActivationMatrix& acts);

/// Total edge weight between two disjoint filter sets.
double cut_weight(const FilterGraph& g, const std::vector<int>& p,
                  const std::vector<int>& q);

/// Sum of member degrees.
double volume(const FilterGraph& g, const std::vector<int>& p);

/// Normalized cut of a disjoint covering partition list:
/// half the sum over partitions of cut(P, complement) / vol(P).
/// Throws ValidationError on a zero-volume partition.
double ncut_value(const FilterGraph& g, const std::vector<FilterPartition>& partitions);

}  // namespace rocoin
