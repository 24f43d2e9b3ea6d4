#pragma once

#include <string>

#include "ldns/graph.hpp"

namespace ldns::graph {

// Dataset directory layout:
//   edges.txt     one "u v" pair per line, whitespace separated, 0-indexed
//   features.txt  N lines, F whitespace-separated reals per line
//   labels.txt    N lines, one integer per line, -1 for unlabeled
//   splits.json   {"train":[...], "val":[...], "test":[...]}
//
// Each undirected edge appears once on disk; duplicates and reversed
// duplicates are merged on load, self-loop lines are dropped.
Graph load_graph(const std::string& edges_path, const std::string& features_path,
                 const std::string& labels_path, const std::string& splits_path);

Graph load_dataset_dir(const std::string& dir);

void save_dataset_dir(const Graph& g, const std::string& dir);

}  // namespace ldns::graph
