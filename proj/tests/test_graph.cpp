#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "ldns/clustering.hpp"
#include "ldns/graph.hpp"
#include "ldns/graph_io.hpp"
#include "ldns/oracle.hpp"
#include "ldns/synth.hpp"

using namespace ldns;
using graph::Graph;

namespace {

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return graph::make_graph(n, edges, Matrix(n, 1), {});
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return graph::make_graph(n, edges, Matrix(n, 1), {});
}

// two complete blocks joined by the given bridge edges
Graph two_cliques(int size, const std::vector<std::pair<int, int>>& bridges) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j) {
      edges.emplace_back(i, j);
      edges.emplace_back(size + i, size + j);
    }
  for (auto b : bridges) edges.push_back(b);
  std::vector<int> labels(2 * size, 0);
  for (int i = size; i < 2 * size; ++i) labels[i] = 1;
  return graph::make_graph(2 * size, edges, Matrix(2 * size, 2), labels);
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ldns_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("loader builds a path graph and dedups reversed edges") {
  const auto dir = temp_dir("load");
  std::ofstream(dir / "edges.txt") << "0 1\n1 2\n1 0\n";
  std::ofstream(dir / "features.txt") << "1 0\n0 1\n1 1\n";
  std::ofstream(dir / "labels.txt") << "0\n1\n-1\n";
  std::ofstream(dir / "splits.json") << R"({"train":[0],"val":[1],"test":[2]})";

  const Graph g = graph::load_dataset_dir(dir.string());
  CHECK(g.num_nodes == 3);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(g.num_edges() == 2);
  CHECK(g.labels[2] == -1);
}

TEST_CASE("loader rejects out-of-range node ids with a line number") {
  const auto dir = temp_dir("bounds");
  std::ofstream(dir / "edges.txt") << "0 1\n1 2\n";
  std::ofstream(dir / "features.txt") << "1\n2\n";  // only two nodes
  std::ofstream(dir / "labels.txt") << "0\n1\n";
  std::ofstream(dir / "splits.json") << R"({"train":[0]})";
  try {
    graph::load_dataset_dir(dir.string());
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("edges.txt:2") != std::string::npos);
  }
}

TEST_CASE("self-loop lines are dropped, malformed lines error out") {
  const auto dir = temp_dir("selfloop");
  std::ofstream(dir / "edges.txt") << "0 0\n0 1\n";
  std::ofstream(dir / "features.txt") << "1\n2\n";
  std::ofstream(dir / "labels.txt") << "0\n1\n";
  std::ofstream(dir / "splits.json") << "{}";
  const Graph g = graph::load_dataset_dir(dir.string());
  CHECK(g.num_edges() == 1);
  CHECK_FALSE(g.has_edge(0, 0));

  std::ofstream(dir / "edges.txt") << "0 x\n";
  CHECK_THROWS_AS(graph::load_dataset_dir(dir.string()), std::runtime_error);
}

TEST_CASE("save then load is the identity on all graph fields") {
  Rng rng(3);
  Rng gen = rng.substream("graph-gen");
  Graph g = graph::generate_sbm({10, 12, 9}, 0.5, 0.08, 5, gen);
  Rng srng = rng.substream("splits");
  graph::assign_splits(g, 0.2, 0.3, 0.3, srng);

  const auto dir = temp_dir("roundtrip");
  graph::save_dataset_dir(g, dir.string());
  const Graph h = graph::load_dataset_dir(dir.string());

  REQUIRE(h.num_nodes == g.num_nodes);
  CHECK(h.adj == g.adj);
  CHECK(h.labels == g.labels);
  CHECK(h.train_mask == g.train_mask);
  CHECK(h.val_mask == g.val_mask);
  CHECK(h.test_mask == g.test_mask);
  REQUIRE(h.features.rows() == g.features.rows());
  CHECK(max_abs_diff(h.features, g.features) == 0.0);  // %.17g round-trips
}

TEST_CASE("bfs levels on path, disconnected pair, and star") {
  const Graph p = path_graph(4);
  const auto d = graph::bfs_levels(p, 0);
  CHECK(d == std::vector<int>{0, 1, 2, 3});

  const Graph two = graph::make_graph(3, {{0, 1}}, Matrix(3, 1), {});
  const auto d2 = graph::bfs_levels(two, 0);
  CHECK(d2[1] == 1);
  CHECK(d2[2] == -1);  // unreachable

  std::vector<std::pair<int, int>> star_edges;
  for (int leaf = 1; leaf <= 5; ++leaf) star_edges.emplace_back(0, leaf);
  const Graph star = graph::make_graph(6, star_edges, Matrix(6, 1), {});
  const auto d3 = graph::bfs_levels(star, 0);
  for (int leaf = 1; leaf <= 5; ++leaf) CHECK(d3[leaf] == 1);
}

TEST_CASE("bfs distances match Floyd-Warshall on random graphs") {
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 5 + rng.index(45);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.15)) edges.emplace_back(i, j);
    const Graph g = graph::make_graph(n, edges, Matrix(n, 1), {});
    const auto fw = oracle::floyd_warshall(g);
    for (int s = 0; s < n; ++s) CHECK(graph::bfs_levels(g, s) == fw[s]);
  }
}

TEST_CASE("candidate set trace on the six-node path") {
  // rings from node 0: V_2 = {2}, V_3 = {3}; both singletons, so the draw is
  // forced: add {1,2,3} and {2,3,4}, then drop node 0 and its neighbour 1
  const Graph p = path_graph(6);
  Rng rng(1);
  const auto s = graph::build_candidate_set(p, 0, 3, rng);
  REQUIRE(s.has_value());
  CHECK(s->members == std::vector<int>{2, 3, 4});
  CHECK(s->center == 0);
}

TEST_CASE("candidate set edge cases: isolated node and complete graph") {
  const Graph lone = graph::make_graph(2, {}, Matrix(2, 1), {});
  Rng rng(1);
  CHECK_FALSE(graph::build_candidate_set(lone, 0, 3, rng).has_value());

  const Graph k4 = complete_graph(4);  // diameter 1: every ring past 1 empty
  CHECK_FALSE(graph::build_candidate_set(k4, 0, 3, rng).has_value());
}

TEST_CASE("candidate sets never contain the center or its neighbours") {
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    Rng gen = rng.substream("gen", {static_cast<std::uint64_t>(rep)});
    const Graph g = graph::generate_sbm({15, 15}, 0.3, 0.05, 3, gen);
    const int center = rng.index(g.num_nodes);
    Rng crng = rng.substream("cand", {static_cast<std::uint64_t>(rep)});
    const auto s = graph::build_candidate_set(g, center, 6, crng);
    if (!s) continue;
    CHECK(!s->members.empty());
    int max_deg = 0;
    for (int i = 0; i < g.num_nodes; ++i) max_deg = std::max(max_deg, g.degree(i));
    CHECK(static_cast<int>(s->members.size()) <= 5 * (1 + max_deg));
    for (int m : s->members) {
      CHECK(m != center);
      CHECK_FALSE(g.has_edge(center, m));
    }
  }
}

TEST_CASE("central node selection: star hub, regular graph, small pool") {
  std::vector<std::pair<int, int>> star_edges;
  for (int leaf = 1; leaf <= 5; ++leaf) star_edges.emplace_back(0, leaf);
  const Graph star = graph::make_graph(6, star_edges, Matrix(6, 1), {});
  Rng rng(2);
  CHECK(graph::select_central_nodes(star, 0.2, rng) == std::vector<int>{0});

  // cycle: every degree equals the mean, nobody exceeds it
  std::vector<std::pair<int, int>> cyc;
  for (int i = 0; i < 8; ++i) cyc.emplace_back(i, (i + 1) % 8);
  const Graph cycle = graph::make_graph(8, cyc, Matrix(8, 1), {});
  CHECK(graph::select_central_nodes(cycle, 0.5, rng).empty());

  // pool of exactly three high-degree nodes, request larger than the pool
  std::vector<std::pair<int, int>> e;
  for (int hub = 0; hub < 3; ++hub)
    for (int v = 0; v < 10; ++v)
      if (hub != v) e.emplace_back(hub, v);
  const Graph hubs = graph::make_graph(10, e, Matrix(10, 1), {});
  CHECK(graph::select_central_nodes(hubs, 1.0, rng) == std::vector<int>{0, 1, 2});
}

TEST_CASE("sbm generator: disjoint cliques, complete graph, connected fixture") {
  Rng rng(9);
  const Graph iso = graph::generate_sbm({4, 4}, 1.0, 0.0, 3, rng, 1);
  CHECK(iso.num_nodes == 4);  // one K4 survives as the largest component
  for (int i = 0; i < 4; ++i) CHECK(iso.degree(i) == 3);

  const Graph full = graph::generate_sbm({4, 4}, 1.0, 1.0, 3, rng, 1);
  CHECK(full.num_nodes == 8);
  CHECK(full.num_edges() == 28);

  const Graph fixture = graph::generate_sbm({50, 50, 50, 50, 50, 50}, 0.2, 0.01, 8, rng);
  CHECK(fixture.num_nodes == 300);
  CHECK(graph::is_connected(fixture));
  CHECK(fixture.num_classes() == 6);
}

TEST_CASE("bottleneck construction keeps a single-bridge graph unchanged") {
  const Graph g = two_cliques(5, {{0, 5}});
  Rng rng(4);
  const Graph out = graph::build_bottleneck_graph(g, 2, rng);
  CHECK(out.num_nodes == 10);
  CHECK(out.num_edges() == g.num_edges());
}

TEST_CASE("bottleneck construction cuts three bridges down to one") {
  const Graph g = two_cliques(6, {{0, 6}, {1, 7}, {2, 8}});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const Graph out = graph::build_bottleneck_graph(g, 2, rng);
    // recompute communities on the output with the same seed stream
    Rng rng2(seed);
    const auto comm = cluster::fluid_communities(out, 2, rng2).assignment;
    int inter = 0;
    for (int u = 0; u < out.num_nodes; ++u)
      for (int v : out.adj[u])
        if (u < v && comm[u] != comm[v]) ++inter;
    CHECK(inter == 1);
  }
}

TEST_CASE("bottleneck construction fails on an over-partitioned clique") {
  const Graph k6 = complete_graph(6);
  Rng rng(8);
  CHECK_THROWS(graph::build_bottleneck_graph(k6, 3, rng));
}

TEST_CASE("induced subgraph remaps masks and labels") {
  Graph g = two_cliques(3, {{0, 3}});
  g.train_mask = {0, 4};
  g.val_mask = {1};
  g.test_mask = {5};
  const Graph sub = graph::induced_subgraph(g, {0, 1, 4, 5});
  CHECK(sub.num_nodes == 4);
  CHECK(sub.train_mask == std::vector<int>{0, 2});
  CHECK(sub.val_mask == std::vector<int>{1});
  CHECK(sub.test_mask == std::vector<int>{3});
  CHECK(sub.labels == std::vector<int>{0, 0, 1, 1});
  CHECK(sub.has_edge(0, 1));
  CHECK(sub.has_edge(2, 3));
  CHECK_FALSE(sub.has_edge(0, 3));
}

TEST_CASE("split assignment respects fractions and stays disjoint") {
  Rng rng(6);
  Rng gen = rng.substream("gen");
  Graph g = graph::generate_sbm({40, 40}, 0.3, 0.05, 4, gen);
  Rng srng = rng.substream("splits");
  graph::assign_splits(g, 0.25, 0.25, 0.5, srng);
  CHECK(g.train_mask.size() == 20);
  CHECK(g.val_mask.size() == 20);
  CHECK(g.test_mask.size() == 40);
  std::set<int> all(g.train_mask.begin(), g.train_mask.end());
  all.insert(g.val_mask.begin(), g.val_mask.end());
  all.insert(g.test_mask.begin(), g.test_mask.end());
  CHECK(all.size() == 80);
}
