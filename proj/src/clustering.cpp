#include "ldns/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldns/simd.hpp"

namespace ldns::cluster {

namespace {
constexpr double kTieTol = 1e-12;
}

Communities fluid_communities(const graph::Graph& g, int q, Rng& rng, int max_iter) {
  if (q < 1 || q > g.num_nodes)
    throw std::invalid_argument("fluid_communities: q outside [1, N]");
  if (!graph::is_connected(g))
    throw std::invalid_argument("fluid_communities: graph must be connected");

  std::vector<int> comm(g.num_nodes, -1);
  std::vector<int> size(q, 0);
  const auto seeds = rng.sample_without_replacement(g.num_nodes, q);
  for (int c = 0; c < q; ++c) {
    comm[seeds[c]] = c;
    size[c] = 1;
  }

  std::vector<double> score(q);
  std::vector<int> touched;
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    const auto order = rng.permutation(g.num_nodes);
    for (int v : order) {
      touched.clear();
      auto bump = [&](int c) {
        if (score[c] == 0.0) touched.push_back(c);
        score[c] += 1.0 / size[c];
      };
      if (comm[v] >= 0) bump(comm[v]);
      for (int w : g.adj[v])
        if (comm[w] >= 0) bump(comm[w]);
      if (touched.empty()) continue;

      double best = 0.0;
      for (int c : touched) best = std::max(best, score[c]);
      int pick = -1;
      bool current_is_best = false;
      for (int c : touched) {
        if (score[c] >= best - kTieTol) {
          if (c == comm[v]) current_is_best = true;
          if (pick < 0 || c < pick) pick = c;
        }
      }
      if (current_is_best) pick = comm[v];
      for (int c : touched) score[c] = 0.0;

      if (pick == comm[v]) continue;
      if (comm[v] >= 0 && size[comm[v]] == 1) continue;  // a fluid never dies
      if (comm[v] >= 0) --size[comm[v]];
      ++size[pick];
      comm[v] = pick;
      changed = true;
    }
    if (!changed) break;  // on a connected graph this implies full coverage
  }

  for (int c : comm)
    if (c < 0)
      throw std::runtime_error("fluid_communities: unassigned nodes remain");
  Communities out;
  out.count = q;
  out.assignment = std::move(comm);
  return out;
}

Matrix community_features(const Matrix& reps, const Communities& c) {
  Matrix feats(c.count, reps.cols());
  std::vector<int> size(c.count, 0);
  for (std::size_t i = 0; i < c.assignment.size(); ++i) {
    const int q = c.assignment[i];
    simd::axpy(1.0, reps.row(i), feats.row(q), reps.cols());
    ++size[q];
  }
  for (int q = 0; q < c.count; ++q) {
    if (size[q] == 0) throw std::runtime_error("community_features: empty community");
    simd::scale(feats.row(q), 1.0 / size[q], feats.cols());
  }
  return feats;
}

std::vector<double> candidate_features(const Matrix& reps,
                                       const graph::CandidateSet& s) {
  if (s.members.empty())
    throw std::invalid_argument("candidate_features: empty candidate set");
  std::vector<double> mean(reps.cols(), 0.0);
  for (int j : s.members) simd::axpy(1.0, reps.row(j), mean.data(), reps.cols());
  simd::scale(mean.data(), 1.0 / s.members.size(), mean.size());
  return mean;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

Clustering kmeans(const Matrix& points, int k, Rng& rng, int iters) {
  const int n = static_cast<int>(points.rows());
  const std::size_t f = points.cols();
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: k outside [1, N]");

  Matrix centroids(k, f);
  // k-means++ seeding
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  {
    const int first = rng.index(n);
    std::copy(points.row(first), points.row(first) + f, centroids.row(0));
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        mind[i] = std::min(mind[i], sq_dist(points.row(i), centroids.row(c - 1), f));
        total += mind[i];
      }
      int pick;
      if (total <= 0.0) {
        pick = rng.index(n);  // all points coincide with chosen centroids
      } else {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (int i = 0; i < n; ++i) {
          acc += mind[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      }
      std::copy(points.row(pick), points.row(pick) + f, centroids.row(c));
    }
  }

  std::vector<int> assign(n, 0);
  std::vector<int> count(k, 0);
  for (int iter = 0; iter < iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bestd = sq_dist(points.row(i), centroids.row(0), f);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points.row(i), centroids.row(c), f);
        if (d < bestd - kTieTol) {
          bestd = d;
          best = c;
        }
      }
      if (best != assign[i]) {
        assign[i] = best;
        changed = true;
      }
    }

    centroids.fill(0.0);
    std::fill(count.begin(), count.end(), 0);
    for (int i = 0; i < n; ++i) {
      simd::axpy(1.0, points.row(i), centroids.row(assign[i]), f);
      ++count[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) {
        simd::scale(centroids.row(c), 1.0 / count[c], f);
        continue;
      }
      // reseed an empty cluster to the point farthest from its centroid
      int far_i = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const double d = sq_dist(points.row(i), centroids.row(assign[i]), f);
        if (d > far_d) {
          far_d = d;
          far_i = i;
        }
      }
      std::copy(points.row(far_i), points.row(far_i) + f, centroids.row(c));
      assign[far_i] = c;
      changed = true;
    }
    if (!changed) break;
  }

  // final assignment so every point sits with its nearest centroid
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bestd = sq_dist(points.row(i), centroids.row(0), f);
    for (int c = 1; c < k; ++c) {
      const double d = sq_dist(points.row(i), centroids.row(c), f);
      if (d < bestd - kTieTol) {
        bestd = d;
        best = c;
      }
    }
    assign[i] = best;
  }

  Clustering out;
  out.k = k;
  out.assignment = std::move(assign);
  out.centroids = std::move(centroids);
  return out;
}

double kmeans_objective(const Matrix& points, const Clustering& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i)
    s += sq_dist(points.row(i), c.centroids.row(c.assignment[i]), points.cols());
  return s;
}

}  // namespace ldns::cluster
