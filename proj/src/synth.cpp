#include "ldns/synth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ldns/clustering.hpp"

namespace ldns::graph {

Graph generate_sbm(const std::vector<int>& block_sizes, double p_in, double p_out,
                   int feature_dim, Rng& rng, int max_tries) {
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1)
    throw std::invalid_argument("generate_sbm: probabilities outside [0,1]");
  const int n = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  if (n <= 0) throw std::invalid_argument("generate_sbm: empty block spec");

  std::vector<int> block(n);
  {
    int at = 0, b = 0;
    for (int sz : block_sizes) {
      for (int t = 0; t < sz; ++t) block[at++] = b;
      ++b;
    }
  }

  Graph last;
  for (int attempt = 0; attempt < std::max(1, max_tries); ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double p = block[i] == block[j] ? p_in : p_out;
        if (p > 0.0 && rng.bernoulli(p)) edges.emplace_back(i, j);
      }
    }
    Matrix feats(n, feature_dim);
    for (int i = 0; i < n; ++i) {
      for (int f = 0; f < feature_dim; ++f) feats(i, f) = rng.normal(0.0, 0.1);
      feats(i, block[i] % feature_dim) += 1.0;
    }
    last = make_graph(n, edges, std::move(feats), block);
    if (is_connected(last)) return last;
  }
  return largest_component_subgraph(last);
}

Graph build_bottleneck_graph(const Graph& g, int q, Rng& rng) {
  if (q < 2) throw std::invalid_argument("build_bottleneck_graph: q must be >= 2");
  if (!is_connected(g))
    throw std::invalid_argument("build_bottleneck_graph: graph must be connected");

  const auto comm = cluster::fluid_communities(g, q, rng).assignment;

  std::vector<char> alive(g.num_nodes, 1);
  auto inter_degree = [&](int u) {
    if (!alive[u]) return 0;
    int d = 0;
    for (int v : g.adj[u])
      if (alive[v] && comm[v] != comm[u]) ++d;
    return d;
  };

  while (true) {
    int total = 0;
    for (int u = 0; u < g.num_nodes; ++u) total += inter_degree(u);
    total /= 2;
    if (total <= 1) break;

    // delete a linking node, but never the one whose removal would sever the
    // last inter-community edge
    std::vector<int> candidates;
    for (int u = 0; u < g.num_nodes; ++u) {
      const int d = inter_degree(u);
      if (d > 0 && total - d >= 1) candidates.push_back(u);
    }
    if (candidates.empty()) break;
    alive[candidates[rng.index(candidates.size())]] = 0;
  }

  std::vector<int> keep;
  for (int u = 0; u < g.num_nodes; ++u)
    if (alive[u]) keep.push_back(u);
  Graph out = largest_component_subgraph(induced_subgraph(g, keep));
  if (out.num_nodes < 2 * q)
    throw std::runtime_error(
        "build_bottleneck_graph: over-deletion left fewer than 2q nodes");
  return out;
}

void assign_splits(Graph& g, double train_frac, double val_frac, double test_frac,
                   Rng& rng) {
  if (train_frac + val_frac + test_frac > 1.0 + 1e-9)
    throw std::invalid_argument("assign_splits: fractions exceed 1");
  const int c = g.num_classes();
  std::vector<std::vector<int>> by_class(std::max(c, 1));
  for (int i = 0; i < g.num_nodes; ++i) {
    if (g.labels[i] >= 0)
      by_class[g.labels[i]].push_back(i);
  }
  std::vector<int> train, val, test;
  for (auto& nodes : by_class) {
    const int n = static_cast<int>(nodes.size());
    auto order = rng.permutation(n);
    const int ntr = static_cast<int>(train_frac * n);
    const int nva = static_cast<int>(val_frac * n);
    const int nte = static_cast<int>(test_frac * n);
    for (int t = 0; t < n; ++t) {
      const int node = nodes[order[t]];
      if (t < ntr)
        train.push_back(node);
      else if (t < ntr + nva)
        val.push_back(node);
      else if (t < ntr + nva + nte)
        test.push_back(node);
    }
  }
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  std::sort(test.begin(), test.end());
  g.train_mask = std::move(train);
  g.val_mask = std::move(val);
  g.test_mask = std::move(test);
}

}  // namespace ldns::graph
