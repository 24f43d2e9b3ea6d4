#pragma once

#include <span>
#include <vector>

#include "ldns/graph.hpp"
#include "ldns/matrix.hpp"
#include "ldns/rng.hpp"

namespace ldns::cluster {

struct Communities {
  int count = 0;
  std::vector<int> assignment;  // node -> community id in [0, count)
};

// Fluid propagation partitioning: Q random seeds, each node repeatedly adopts
// the community with the highest summed density over itself and its
// neighbours (density = 1/community size), until a fixpoint or max_iter
// sweeps.  Ties keep the current assignment when it participates, otherwise
// the lowest community id wins.  Requires a connected graph.
Communities fluid_communities(const graph::Graph& g, int q, Rng& rng,
                              int max_iter = 100);

// Per-community mean of representation rows (count x F).
Matrix community_features(const Matrix& reps, const Communities& c);

// Mean representation over a candidate set's members.
std::vector<double> candidate_features(const Matrix& reps,
                                       const graph::CandidateSet& s);

struct Clustering {
  int k = 0;
  std::vector<int> assignment;  // point -> cluster id
  Matrix centroids;             // k x F
};

// Lloyd's algorithm with k-means++ seeding and Euclidean distance; empty
// clusters are reseeded to the point farthest from its assigned centroid.
Clustering kmeans(const Matrix& points, int k, Rng& rng, int iters = 50);

double kmeans_objective(const Matrix& points, const Clustering& c);

}  // namespace ldns::cluster
