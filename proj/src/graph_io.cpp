#include "ldns/graph_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ldns::graph {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

Matrix read_features(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!ss.eof()) parse_fail(path, lineno, "expected a real number");
    if (width == 0) width = row.size();
    if (row.size() != width) parse_fail(path, lineno, "inconsistent feature width");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no feature rows");
  Matrix m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i));
  return m;
}

std::vector<std::pair<int, int>> read_edges(const std::string& path, int num_nodes) {
  auto in = open_or_throw(path);
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    long u, v;
    if (!(ss >> u >> v)) parse_fail(path, lineno, "expected \"u v\"");
    std::string extra;
    if (ss >> extra) parse_fail(path, lineno, "trailing tokens after edge");
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes)
      parse_fail(path, lineno, "node id out of range [0," +
                                   std::to_string(num_nodes) + ")");
    if (u == v) continue;  // reject self-loop lines
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return edges;
}

std::vector<int> read_labels(const std::string& path, int num_nodes) {
  auto in = open_or_throw(path);
  std::vector<int> labels;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    int y;
    if (!(ss >> y)) parse_fail(path, lineno, "expected an integer label");
    labels.push_back(y);
  }
  if (static_cast<int>(labels.size()) != num_nodes)
    throw std::runtime_error(path + ": expected " + std::to_string(num_nodes) +
                             " labels, got " + std::to_string(labels.size()));
  return labels;
}

std::vector<int> read_mask(const json& j, const char* key) {
  std::vector<int> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) out.push_back(v.get<int>());
  return out;
}

}  // namespace

Graph load_graph(const std::string& edges_path, const std::string& features_path,
                 const std::string& labels_path, const std::string& splits_path) {
  Matrix features = read_features(features_path);
  const int n = static_cast<int>(features.rows());
  auto edges = read_edges(edges_path, n);
  auto labels = read_labels(labels_path, n);

  json splits;
  {
    auto in = open_or_throw(splits_path);
    try {
      in >> splits;
    } catch (const json::exception& e) {
      throw std::runtime_error(splits_path + ": " + e.what());
    }
  }
  return make_graph(n, edges, std::move(features), std::move(labels),
                    read_mask(splits, "train"), read_mask(splits, "val"),
                    read_mask(splits, "test"));
}

Graph load_dataset_dir(const std::string& dir) {
  return load_graph(dir + "/edges.txt", dir + "/features.txt", dir + "/labels.txt",
                    dir + "/splits.json");
}

void save_dataset_dir(const Graph& g, const std::string& dir) {
  std::filesystem::create_directories(dir);

  std::ofstream edges(dir + "/edges.txt");
  for (int u = 0; u < g.num_nodes; ++u)
    for (int v : g.adj[u])
      if (u < v) edges << u << " " << v << "\n";

  std::ofstream feats(dir + "/features.txt");
  char buf[64];
  for (int i = 0; i < g.num_nodes; ++i) {
    for (std::size_t f = 0; f < g.features.cols(); ++f) {
      std::snprintf(buf, sizeof buf, "%.17g", g.features(i, f));
      feats << (f ? " " : "") << buf;
    }
    feats << "\n";
  }

  std::ofstream labels(dir + "/labels.txt");
  for (int y : g.labels) labels << y << "\n";

  nlohmann::json splits;
  splits["train"] = g.train_mask;
  splits["val"] = g.val_mask;
  splits["test"] = g.test_mask;
  std::ofstream sp(dir + "/splits.json");
  sp << splits.dump(2) << "\n";
}

}  // namespace ldns::graph
