#pragma once

#include <cstdint>
#include <vector>

#include "rocoin/activation_graph.hpp"
#include "rocoin/matrix.hpp"
#include "rocoin/types.hpp"

namespace rocoin {

/// Columns of H are eigenvectors of the normalized Laplacian for the K
/// smallest eigenvalues, orthonormal, residual-checked, with a fixed sign
/// convention (largest-magnitude entry positive, ties to the first index).
struct SpectralEmbedding {
  Matrix h;                        // M x K
  std::vector<double> eigenvalues;  // ascending, length K
};

/// L_sym = I - Z^{-1/2} A Z^{-1/2}. Symmetric, unit diagonal, eigenvalues
/// in [0, 2]. Throws ValidationError naming any zero-degree filter.
Matrix normalized_laplacian(const FilterGraph& g);

/// Eigenpairs for the K smallest eigenvalues of a symmetric matrix, via
/// cyclic Jacobi rotations on a dense copy. Deterministic. Throws
/// ConvergenceError (carrying the achieved off-diagonal norm) if the
/// off-diagonal norm does not fall below tol within the sweep budget.
SpectralEmbedding smallest_k_eigen(const Matrix& sym, int k, double tol);

/// Seeded k-means++ over the rows of h, best inertia across `restarts`
/// runs. Every label in {0..k-1} is nonempty: empty clusters are repaired
/// by splitting the largest cluster at its farthest point.
std::vector<int> kmeans_rows(const Matrix& h, int k, std::uint64_t seed,
                             int restarts, int max_iters);

/// Relaxed-Ncut filter partitioning: normalized Laplacian, K smallest
/// eigenvectors, k-means over the embedding rows. Returns K nonempty
/// partitions covering all filters, ordered by smallest member index.
std::vector<FilterPartition> partition_filters(const FilterGraph& g, int k,
                                               const PlannerConfig& cfg);

}  // namespace rocoin
