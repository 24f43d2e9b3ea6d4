#pragma once

#include <vector>

#include "ldns/dpp.hpp"
#include "ldns/matrix.hpp"
#include "ldns/rng.hpp"

namespace ldns::metrics {

// Fraction of mask nodes whose argmax logit hits the label; argmax ties break
// toward the lowest class id.
double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<int>& mask);

// Mean over central nodes and layer pairs (l-1, l) of
// |N_i^{l-1} n N_i^l| / |N_i^l|; pairs with an empty layer-l sample set are
// skipped.  Throws when no valid pair exists.
double ovr_node(const dpp::SampleStore& store, const std::vector<int>& central,
                int num_layers, std::vector<double>* per_layer = nullptr);

// Same overlap but over the sets of k-means cluster ids of the samples, with
// a fresh clustering of each layer's representations.
double ovr_cls(const dpp::SampleStore& store, const std::vector<int>& central,
               const std::vector<Matrix>& reps_per_layer, int k, Rng& rng,
               std::vector<double>* per_layer = nullptr);

// Mean average cosine distance over ordered pairs, reported x100.  Pairs (and
// nodes) whose distance is zero are excluded from the averaging denominators;
// all-zero denominators give 0.
double mad(const Matrix& reps);

struct OverlapReport {
  bool valid = false;
  double ovr_node = 0.0;
  double ovr_cls = 0.0;
  double ovr_5cls = 0.0;
  std::vector<double> per_layer_node;
  std::vector<double> per_layer_cls;
  std::vector<double> per_layer_5cls;
  int k_cls = 0;
  int k_5cls = 0;
};

}  // namespace ldns::metrics
