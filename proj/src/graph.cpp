#include "ldns/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace ldns::graph {

double Graph::mean_degree() const {
  if (num_nodes == 0) return 0.0;
  long total = 0;
  for (const auto& nbrs : adj) total += static_cast<long>(nbrs.size());
  return static_cast<double>(total) / num_nodes;
}

int Graph::num_edges() const {
  long total = 0;
  for (const auto& nbrs : adj) total += static_cast<long>(nbrs.size());
  return static_cast<int>(total / 2);
}

int Graph::num_classes() const {
  int c = 0;
  for (int y : labels) c = std::max(c, y + 1);
  return c;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adj[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

namespace {

void check_mask(const std::vector<int>& mask, int n, const char* name) {
  for (int i : mask)
    if (i < 0 || i >= n)
      throw std::invalid_argument(std::string("mask '") + name +
                                  "' references node out of range");
}

}  // namespace

Graph make_graph(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                 Matrix features, std::vector<int> labels,
                 std::vector<int> train_mask, std::vector<int> val_mask,
                 std::vector<int> test_mask) {
  Graph g;
  g.num_nodes = num_nodes;
  g.adj.assign(num_nodes, {});
  for (auto [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes)
      throw std::invalid_argument("edge references node id >= num_nodes");
    if (u == v) continue;  // self-loops are never stored
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nbrs : g.adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }

  if (features.rows() != static_cast<std::size_t>(num_nodes))
    throw std::invalid_argument("feature row count does not equal num_nodes");
  if (labels.empty()) labels.assign(num_nodes, -1);
  if (labels.size() != static_cast<std::size_t>(num_nodes))
    throw std::invalid_argument("label count does not equal num_nodes");

  check_mask(train_mask, num_nodes, "train");
  check_mask(val_mask, num_nodes, "val");
  check_mask(test_mask, num_nodes, "test");
  std::sort(train_mask.begin(), train_mask.end());
  std::sort(val_mask.begin(), val_mask.end());
  std::sort(test_mask.begin(), test_mask.end());
  std::unordered_set<int> seen(train_mask.begin(), train_mask.end());
  for (int i : val_mask)
    if (!seen.insert(i).second) throw std::invalid_argument("masks overlap");
  for (int i : test_mask)
    if (!seen.insert(i).second) throw std::invalid_argument("masks overlap");

  g.features = std::move(features);
  g.labels = std::move(labels);
  g.train_mask = std::move(train_mask);
  g.val_mask = std::move(val_mask);
  g.test_mask = std::move(test_mask);
  return g;
}

std::vector<int> bfs_levels(const Graph& g, int source) {
  if (source < 0 || source >= g.num_nodes)
    throw std::invalid_argument("bfs_levels: source out of range");
  std::vector<int> dist(g.num_nodes, -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<int> connected_components(const Graph& g) {
  std::vector<int> comp(g.num_nodes, -1);
  int next = 0;
  for (int s = 0; s < g.num_nodes; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : g.adj[u]) {
        if (comp[v] < 0) {
          comp[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool is_connected(const Graph& g) {
  if (g.num_nodes == 0) return true;
  const auto comp = connected_components(g);
  return *std::max_element(comp.begin(), comp.end()) == 0;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& keep) {
  std::vector<int> old_to_new(g.num_nodes, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) old_to_new[keep[i]] = static_cast<int>(i);

  std::vector<std::pair<int, int>> edges;
  for (int u : keep) {
    for (int v : g.adj[u]) {
      if (u < v && old_to_new[v] >= 0)
        edges.emplace_back(old_to_new[u], old_to_new[v]);
    }
  }
  Matrix feats(keep.size(), g.features.cols());
  std::vector<int> labels(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const double* src = g.features.row(keep[i]);
    std::copy(src, src + g.features.cols(), feats.row(i));
    labels[i] = g.labels[keep[i]];
  }
  auto remap = [&](const std::vector<int>& mask) {
    std::vector<int> out;
    for (int i : mask)
      if (old_to_new[i] >= 0) out.push_back(old_to_new[i]);
    return out;
  };
  return make_graph(static_cast<int>(keep.size()), edges, std::move(feats),
                    std::move(labels), remap(g.train_mask), remap(g.val_mask),
                    remap(g.test_mask));
}

Graph largest_component_subgraph(const Graph& g) {
  const auto comp = connected_components(g);
  const int ncomp = g.num_nodes == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> size(ncomp, 0);
  for (int c : comp) ++size[c];
  const int best = static_cast<int>(
      std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<int> keep;
  for (int i = 0; i < g.num_nodes; ++i)
    if (comp[i] == best) keep.push_back(i);
  return induced_subgraph(g, keep);
}

std::optional<CandidateSet> build_candidate_set(const Graph& g, int center,
                                                int path_length, Rng& rng) {
  if (path_length < 2)
    throw std::invalid_argument("build_candidate_set: path_length must be >= 2");
  const auto dist = bfs_levels(g, center);

  std::vector<std::vector<int>> rings(path_length + 1);
  for (int v = 0; v < g.num_nodes; ++v)
    if (dist[v] >= 2 && dist[v] <= path_length) rings[dist[v]].push_back(v);

  std::set<int> pool;
  for (int p = 2; p <= path_length; ++p) {
    const auto& ring = rings[p];
    if (ring.empty()) continue;  // empty rings are skipped
    const int j = ring[rng.index(ring.size())];
    pool.insert(j);
    pool.insert(g.adj[j].begin(), g.adj[j].end());
  }
  pool.erase(center);
  for (int v : g.adj[center]) pool.erase(v);

  if (pool.empty()) return std::nullopt;
  CandidateSet s;
  s.center = center;
  s.members.assign(pool.begin(), pool.end());
  s.path_length = path_length;
  return s;
}

std::vector<int> select_central_nodes(const Graph& g, double fraction, Rng& rng) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw std::invalid_argument("select_central_nodes: fraction outside (0,1]");
  const double mean = g.mean_degree();
  std::vector<int> pool;
  for (int i = 0; i < g.num_nodes; ++i)
    if (g.degree(i) > mean) pool.push_back(i);

  const int want = static_cast<int>(std::ceil(fraction * g.num_nodes));
  if (static_cast<int>(pool.size()) <= want) return pool;

  auto picks = rng.sample_without_replacement(static_cast<int>(pool.size()), want);
  std::vector<int> out;
  out.reserve(picks.size());
  for (int p : picks) out.push_back(pool[p]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ldns::graph
