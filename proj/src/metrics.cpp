#include "ldns/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ldns/clustering.hpp"
#include "ldns/simd.hpp"

namespace ldns::metrics {

double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<int>& mask) {
  if (mask.empty()) throw std::invalid_argument("accuracy: empty mask");
  int hits = 0;
  for (int i : mask) {
    const double* row = logits.row(i);
    int arg = 0;
    for (std::size_t c = 1; c < logits.cols(); ++c)
      if (row[c] > row[arg]) arg = static_cast<int>(c);
    if (arg == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / mask.size();
}

namespace {

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

template <typename Ratio>
double overlap_mean(const std::vector<int>& central, int num_layers, Ratio ratio,
                    std::vector<double>* per_layer) {
  if (per_layer) per_layer->assign(std::max(0, num_layers - 1), 0.0);
  double total = 0.0;
  int count = 0;
  for (int l = 2; l <= num_layers; ++l) {
    double layer_total = 0.0;
    int layer_count = 0;
    for (int i : central) {
      double r;
      if (!ratio(l, i, &r)) continue;
      layer_total += r;
      ++layer_count;
    }
    if (per_layer && layer_count > 0)
      (*per_layer)[l - 2] = layer_total / layer_count;
    total += layer_total;
    count += layer_count;
  }
  if (count == 0)
    throw std::domain_error("overlap rate: no valid (node, layer) pairs");
  return total / count;
}

}  // namespace

double ovr_node(const dpp::SampleStore& store, const std::vector<int>& central,
                int num_layers, std::vector<double>* per_layer) {
  return overlap_mean(
      central, num_layers,
      [&](int l, int i, double* out) {
        const auto& cur = store.at(l, i);
        if (cur.empty()) return false;
        const auto& prev = store.at(l - 1, i);
        *out = static_cast<double>(intersection_size(prev, cur)) / cur.size();
        return true;
      },
      per_layer);
}

double ovr_cls(const dpp::SampleStore& store, const std::vector<int>& central,
               const std::vector<Matrix>& reps_per_layer, int k, Rng& rng,
               std::vector<double>* per_layer) {
  const int num_layers = static_cast<int>(reps_per_layer.size());
  if (store.num_layers < num_layers)
    throw std::invalid_argument("ovr_cls: store has fewer layers than reps");
  std::vector<std::vector<int>> assign(num_layers);
  for (int l = 0; l < num_layers; ++l) {
    Rng sub = rng.substream("kmeans-layer", {static_cast<std::uint64_t>(l)});
    assign[l] = cluster::kmeans(reps_per_layer[l], k, sub).assignment;
  }
  auto cluster_set = [&](int l, const std::vector<int>& nodes) {
    std::set<int> ids;
    for (int j : nodes) ids.insert(assign[l - 1][j]);
    return std::vector<int>(ids.begin(), ids.end());
  };
  return overlap_mean(
      central, num_layers,
      [&](int l, int i, double* out) {
        const auto& cur = store.at(l, i);
        if (cur.empty()) return false;
        const auto cur_cls = cluster_set(l, cur);
        const auto prev_cls = cluster_set(l - 1, store.at(l - 1, i));
        *out = static_cast<double>(intersection_size(prev_cls, cur_cls)) /
               cur_cls.size();
        return true;
      },
      per_layer);
}

double mad(const Matrix& reps) {
  const int n = static_cast<int>(reps.rows());
  if (n < 2) throw std::invalid_argument("mad: need at least two rows");
  const std::size_t f = reps.cols();
  // 1e-12 guards against fp noise in cos of (near-)identical rows
  constexpr double kZero = 1e-12;

  std::vector<double> norms(n);
  for (int i = 0; i < n; ++i) norms[i] = simd::nrm2(reps.row(i), f);

  double node_total = 0.0;
  int node_count = 0;
  for (int i = 0; i < n; ++i) {
    double pair_total = 0.0;
    int pair_count = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double cos = 0.0;
      if (norms[i] != 0.0 && norms[j] != 0.0)
        cos = simd::dot(reps.row(i), reps.row(j), f) / (norms[i] * norms[j]);
      const double d = 1.0 - cos;
      if (std::fabs(d) > kZero) {
        pair_total += d;
        ++pair_count;
      }
    }
    const double di = pair_count > 0 ? pair_total / pair_count : 0.0;
    if (std::fabs(di) > kZero) {
      node_total += di;
      ++node_count;
    }
  }
  if (node_count == 0) return 0.0;
  return 100.0 * node_total / node_count;
}

}  // namespace ldns::metrics
