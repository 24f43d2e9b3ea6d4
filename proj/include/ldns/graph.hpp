#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldns/matrix.hpp"
#include "ldns/rng.hpp"

namespace ldns::graph {

// Immutable undirected graph with node features, labels and split masks.
// Adjacency lists are sorted, symmetric, deduplicated and self-loop free;
// construction goes through make_graph which enforces all of that.
struct Graph {
  int num_nodes = 0;
  std::vector<std::vector<int>> adj;
  Matrix features;              // num_nodes x F
  std::vector<int> labels;      // -1 = unlabeled
  std::vector<int> train_mask;  // sorted node ids, pairwise disjoint sets
  std::vector<int> val_mask;
  std::vector<int> test_mask;

  int degree(int i) const { return static_cast<int>(adj[i].size()); }
  double mean_degree() const;
  int num_edges() const;  // undirected edge count
  int num_classes() const;
  bool has_edge(int u, int v) const;
};

Graph make_graph(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                 Matrix features, std::vector<int> labels,
                 std::vector<int> train_mask = {}, std::vector<int> val_mask = {},
                 std::vector<int> test_mask = {});

// Hop distances from source; -1 marks unreachable nodes.
std::vector<int> bfs_levels(const Graph& g, int source);

std::vector<int> connected_components(const Graph& g);  // node -> component id
bool is_connected(const Graph& g);

// Subgraph on keep (sorted node ids), nodes re-indexed densely, masks remapped.
Graph induced_subgraph(const Graph& g, const std::vector<int>& keep);
Graph largest_component_subgraph(const Graph& g);

// Pool of potential negative samples for a center node, built by walking one
// random node per shortest-path ring p = 2..P and unioning its closed
// neighbourhood, then dropping the center and its first-order neighbours.
struct CandidateSet {
  int center = -1;
  std::vector<int> members;  // sorted, excludes center and N(center)
  int path_length = 0;
};

std::optional<CandidateSet> build_candidate_set(const Graph& g, int center,
                                                int path_length, Rng& rng);

// ceil(fraction*N) nodes drawn without replacement from {i : deg(i) > mean};
// returns the whole pool when it is smaller than the request.
std::vector<int> select_central_nodes(const Graph& g, double fraction, Rng& rng);

}  // namespace ldns::graph
