#include "rocoin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rocoin/errors.hpp"
#include "rocoin/rng.hpp"

namespace rocoin {

Matrix normalized_laplacian(const FilterGraph& g) {
  const std::size_t m = static_cast<std::size_t>(g.filter_count);
  for (std::size_t i = 0; i < m; ++i)
    if (g.degrees[i] <= 0.0)
      throw ValidationError("normalized_laplacian: filter " + std::to_string(i) +
                            " is isolated (zero degree)");
  Matrix lsym(m, m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    lsym(i, i) = 1.0;
    const double di = 1.0 / std::sqrt(g.degrees[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = -g.weights(i, j) * di / std::sqrt(g.degrees[j]);
      lsym(i, j) = v;
      lsym(j, i) = v;
    }
  }
  return lsym;
}

namespace {

double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p,q), accumulated into v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.rows();
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 1.0 / (2.0 * theta);  // avoid theta*theta overflow
  } else {
    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    if (theta < 0.0) t = -t;
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  const double app = a(p, p), aqq = a(q, q);
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p || i == q) continue;
    const double aip = a(i, p), aiq = a(i, q);
    a(i, p) = aip - s * (aiq + tau * aip);
    a(p, i) = a(i, p);
    a(i, q) = aiq + s * (aip - tau * aiq);
    a(q, i) = a(i, q);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double vip = v(i, p), viq = v(i, q);
    v(i, p) = vip - s * (viq + tau * vip);
    v(i, q) = viq + s * (vip - tau * viq);
  }
}

}  // namespace

SpectralEmbedding smallest_k_eigen(const Matrix& sym, int k, double tol) {
  const std::size_t n = sym.rows();
  if (sym.cols() != n) throw ValidationError("smallest_k_eigen: matrix not square");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw ValidationError("smallest_k_eigen: K must lie in [1, M]");
  if (tol <= 0.0) throw ValidationError("smallest_k_eigen: tol must be > 0");

  Matrix a = sym;
  Matrix v(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  constexpr int kMaxSweeps = 64;
  double off = offdiag_norm(a);
  int sweep = 0;
  while (off > tol && sweep < kMaxSweeps) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) rotate(a, v, p, q);
    off = offdiag_norm(a);
    ++sweep;
  }
  if (off > tol)
    throw ConvergenceError("smallest_k_eigen: Jacobi did not converge in " +
                               std::to_string(kMaxSweeps) +
                               " sweeps; off-diagonal norm " + std::to_string(off),
                           off);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SpectralEmbedding emb;
  emb.h = Matrix(n, static_cast<std::size_t>(k));
  emb.eigenvalues.resize(static_cast<std::size_t>(k));
  for (int col = 0; col < k; ++col) {
    const std::size_t src = order[static_cast<std::size_t>(col)];
    emb.eigenvalues[static_cast<std::size_t>(col)] = a(src, src);
    // Sign convention: entry of largest magnitude ends up positive.
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i)
      emb.h(i, static_cast<std::size_t>(col)) = sign * v(i, src);
  }
  return emb;
}

namespace {

double sq_dist(const Matrix& pts, std::size_t row, const std::vector<double>& center) {
  double s = 0.0;
  for (std::size_t c = 0; c < pts.cols(); ++c) {
    const double d = pts(row, c) - center[c];
    s += d * d;
  }
  return s;
}

struct KmeansRun {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

KmeansRun kmeans_once(const Matrix& pts, int k, Rng& rng, int max_iters) {
  const std::size_t n = pts.rows();
  const std::size_t dim = pts.cols();
  const std::size_t kk = static_cast<std::size_t>(k);

  // k-means++ seeding.
  std::vector<std::vector<double>> centers;
  centers.reserve(kk);
  {
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    const std::size_t first = next_index(rng, n);
    centers.emplace_back(dim);
    for (std::size_t c = 0; c < dim; ++c) centers[0][c] = pts(first, c);
    while (centers.size() < kk) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::min(d2[i], sq_dist(pts, i, centers.back()));
        total += d2[i];
      }
      std::size_t pick;
      if (total > 0.0) {
        const double target = next_unit(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = next_index(rng, n);  // all points coincide with a center
      }
      centers.emplace_back(dim);
      for (std::size_t c = 0; c < dim; ++c) centers.back()[c] = pts(pick, c);
    }
  }

  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    // Assignment; ties keep the current label so repair moves stick.
    for (std::size_t i = 0; i < n; ++i) {
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = sq_dist(pts, i, centers[c]);
        if (d < best_d || (d == best_d && static_cast<int>(c) == labels[i])) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (best != labels[i]) {
        labels[i] = best;
        changed = true;
      }
    }

    // Repair empty clusters: split the largest at its farthest point.
    std::vector<std::size_t> count(kk, 0);
    for (int l : labels) count[static_cast<std::size_t>(l)]++;
    for (std::size_t c = 0; c < kk; ++c) {
      if (count[c] > 0) continue;
      std::size_t donor = 0;
      for (std::size_t d = 1; d < kk; ++d)
        if (count[d] > count[donor]) donor = d;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != static_cast<int>(donor)) continue;
        const double d = sq_dist(pts, i, centers[donor]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      labels[far] = static_cast<int>(c);
      count[c] = 1;
      count[donor]--;
      changed = true;
    }

    // Center update.
    for (auto& ctr : centers) std::fill(ctr.begin(), ctr.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < dim; ++c)
        centers[static_cast<std::size_t>(labels[i])][c] += pts(i, c);
    for (std::size_t c = 0; c < kk; ++c)
      for (std::size_t d = 0; d < dim; ++d)
        centers[c][d] /= static_cast<double>(count[c]);

    if (!changed) break;
  }

  KmeansRun run;
  run.labels = labels;
  run.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    run.inertia += sq_dist(pts, i, centers[static_cast<std::size_t>(labels[i])]);
  return run;
}

}  // namespace

std::vector<int> kmeans_rows(const Matrix& h, int k, std::uint64_t seed,
                             int restarts, int max_iters) {
  if (k < 1 || static_cast<std::size_t>(k) > h.rows())
    throw ValidationError("kmeans_rows: K must lie in [1, M]");
  KmeansRun best;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    KmeansRun run = kmeans_once(h, k, rng, max_iters);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best.labels;
}

std::vector<FilterPartition> partition_filters(const FilterGraph& g, int k,
                                               const PlannerConfig& cfg) {
  if (k < 1 || k > g.filter_count)
    throw ValidationError("partition_filters: K must lie in [1, M]");
  const Matrix lsym = normalized_laplacian(g);
  SpectralEmbedding emb = smallest_k_eigen(lsym, k, cfg.eigen_tolerance);

  Matrix rows = emb.h;
  if (cfg.normalize_embedding_rows) {
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      double norm = 0.0;
      for (std::size_t c = 0; c < rows.cols(); ++c) norm += rows(i, c) * rows(i, c);
      norm = std::sqrt(norm);
      if (norm > 0.0)
        for (std::size_t c = 0; c < rows.cols(); ++c) rows(i, c) /= norm;
    }
  }

  const std::vector<int> labels =
      kmeans_rows(rows, k, cfg.seed, cfg.kmeans_restarts, cfg.kmeans_max_iters);

  std::vector<FilterPartition> parts(static_cast<std::size_t>(k));
  for (int f = 0; f < g.filter_count; ++f)
    parts[static_cast<std::size_t>(labels[static_cast<std::size_t>(f)])].members.push_back(f);
  // Canonical order: partitions sorted by their smallest filter index.
  std::sort(parts.begin(), parts.end(), [](const FilterPartition& a, const FilterPartition& b) {
    return a.members.front() < b.members.front();
  });
  return parts;
}

}  // namespace rocoin
