#include "ldns/train.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ldns/clustering.hpp"
#include "ldns/synth.hpp"

namespace ldns::gnn {

cluster::Communities partition_for_sampling(const graph::Graph& g, int q, Rng& rng) {
  const auto comp = connected_components(g);
  const int ncomp = g.num_nodes == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  if (ncomp <= 1) return cluster::fluid_communities(g, std::min(q, g.num_nodes), rng);

  std::vector<int> size(ncomp, 0);
  for (int c : comp) ++size[c];
  const int big = static_cast<int>(std::max_element(size.begin(), size.end()) -
                                   size.begin());
  std::vector<int> keep;
  for (int i = 0; i < g.num_nodes; ++i)
    if (comp[i] == big) keep.push_back(i);
  const graph::Graph lcc = induced_subgraph(g, keep);
  const auto fluid =
      cluster::fluid_communities(lcc, std::min(q, lcc.num_nodes), rng);

  cluster::Communities out;
  out.count = fluid.count;
  out.assignment.assign(g.num_nodes, -1);
  for (std::size_t t = 0; t < keep.size(); ++t)
    out.assignment[keep[t]] = fluid.assignment[t];
  // every smaller component becomes a community of its own
  std::vector<int> extra(ncomp, -1);
  for (int i = 0; i < g.num_nodes; ++i) {
    if (out.assignment[i] >= 0) continue;
    if (extra[comp[i]] < 0) extra[comp[i]] = out.count++;
    out.assignment[i] = extra[comp[i]];
  }
  return out;
}

int resolve_q(const graph::Graph& g, const ExperimentConfig& cfg) {
  if (cfg.q_communities > 0) return cfg.q_communities;
  const int classes = g.num_classes();
  if (classes > 0) return classes;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(g.num_nodes))));
}

namespace {

struct OverlapAccumulator {
  double total = 0.0;
  int count = 0;
  std::vector<double> per_layer_total;
  std::vector<int> per_layer_count;

  void add(double value, const std::vector<double>& per_layer) {
    total += value;
    ++count;
    if (per_layer_total.size() < per_layer.size()) {
      per_layer_total.resize(per_layer.size(), 0.0);
      per_layer_count.resize(per_layer.size(), 0);
    }
    for (std::size_t i = 0; i < per_layer.size(); ++i) {
      per_layer_total[i] += per_layer[i];
      ++per_layer_count[i];
    }
  }
  double mean() const { return count > 0 ? total / count : 0.0; }
  std::vector<double> layer_means() const {
    std::vector<double> out(per_layer_total.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (per_layer_count[i] > 0) out[i] = per_layer_total[i] / per_layer_count[i];
    return out;
  }
};

}  // namespace

TrainResult train(const graph::Graph& g, const ExperimentConfig& cfg,
                  const TrainHooks* hooks) {
  cfg.validate();
  if (g.train_mask.empty())
    throw std::invalid_argument("train: dataset has an empty train mask");
  const int classes = g.num_classes();
  if (classes < 2) throw std::invalid_argument("train: need at least two classes");

  const Rng master(cfg.seed);
  const int layers = cfg.layers;
  const bool sampling_on = cfg.sampler != SamplerKind::kNone;
  const int q = resolve_q(g, cfg);

  TrainResult result;
  {
    Rng init_rng = master.substream("init");
    result.params = init_params(static_cast<int>(g.features.cols()), cfg.hidden,
                                classes, layers, cfg.mu_init, init_rng);
  }
  AdamState adam = init_adam(result.params);

  if (sampling_on) {
    Rng central_rng = master.substream("central");
    result.central = graph::select_central_nodes(g, cfg.central_fraction, central_rng);
    if (result.central.empty())
      std::fprintf(stderr,
                   "ldns: no node exceeds the mean degree; negative sampling "
                   "is inactive\n");
  }

  OverlapAccumulator acc_node, acc_cls, acc_5cls;
  const int k_cls = std::min(
      g.num_nodes, std::max(1, cfg.cls_multipliers.front() * classes));
  const int k_5cls =
      cfg.cls_multipliers.size() > 1
          ? std::min(g.num_nodes, std::max(1, cfg.cls_multipliers[1] * classes))
          : 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto eidx = static_cast<std::uint64_t>(epoch);

    // per-epoch candidate sets and community cover
    std::map<int, graph::CandidateSet> cand;
    cluster::Communities comms;
    if (sampling_on && !result.central.empty()) {
      for (int i : result.central) {
        Rng crng = master.substream("candidates", {eidx, static_cast<std::uint64_t>(i)});
        if (auto s = graph::build_candidate_set(g, i, cfg.path_length, crng))
          cand.emplace(i, std::move(*s));
      }
      Rng comm_rng = master.substream("communities", {eidx});
      comms = partition_for_sampling(g, q, comm_rng);
    }

    // forward pass, sampling layer by layer on each layer's input reps
    dpp::SampleStore store(layers, g.num_nodes);
    ForwardCache cache;
    cache.activations.assign(1, g.features);
    cache.store = &store;
    Matrix h = g.features;
    for (int l = 1; l <= layers; ++l) {
      if (sampling_on) {
        for (auto& [i, s] : cand) {
          const int k = std::max(
              1, static_cast<int>(std::ceil(cfg.k_fraction * s.members.size())));
          Rng srng = master.substream(
              "sampling", {eidx, static_cast<std::uint64_t>(l),
                           static_cast<std::uint64_t>(i)});
          const std::vector<int> empty_prev;
          const std::vector<int>& prev =
              l > 1 ? store.at(l - 1, i) : empty_prev;
          dpp::SampleDiag diag;
          dpp::SampleDiag* dptr = hooks && hooks->on_sample ? &diag : nullptr;
          std::vector<int> picks;
          if (cfg.sampler == SamplerKind::kLayerDiverse) {
            picks = dpp::layer_diverse_sample(g, h, s, prev, k, cfg.gamma, srng,
                                              comms, dptr);
          } else {
            picks = dpp::sample_independent(g, h, s, prev, k, cfg.gamma, srng,
                                            comms, dptr);
          }
          store.at(l, i) = std::move(picks);
          if (dptr) {
            diag.layer = l;
            hooks->on_sample(epoch, l, diag);
          }
        }
      }
      Matrix m = matmul(h, result.params.weights[l - 1]);
      Matrix z = neg_aggregate(m, g, store.sets[l - 1], result.params.mu);
      cache.linear.push_back(std::move(m));
      cache.preact.push_back(z);
      if (l < layers) relu_inplace(z);
      cache.activations.push_back(z);
      h = std::move(z);
    }
    const Matrix& logits = cache.activations.back();

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = cross_entropy(logits, g.labels, g.train_mask);
    rec.train_acc = metrics::accuracy(logits, g.labels, g.train_mask);
    if (!g.val_mask.empty())
      rec.val_acc = metrics::accuracy(logits, g.labels, g.val_mask);
    if (!g.test_mask.empty())
      rec.test_acc = metrics::accuracy(logits, g.labels, g.test_mask);
    rec.mad = g.num_nodes >= 2 ? metrics::mad(logits) : 0.0;

    if (sampling_on && layers >= 2 && store.any_samples()) {
      std::vector<Matrix> reps_per_layer(cache.activations.begin() + 1,
                                         cache.activations.end());
      try {
        std::vector<double> per_layer;
        rec.ovr_node = metrics::ovr_node(store, result.central, layers, &per_layer);
        acc_node.add(*rec.ovr_node, per_layer);

        Rng krng = master.substream("kmeans", {eidx, 1});
        rec.ovr_cls = metrics::ovr_cls(store, result.central, reps_per_layer,
                                       k_cls, krng, &per_layer);
        acc_cls.add(*rec.ovr_cls, per_layer);

        if (k_5cls > 0) {
          Rng krng5 = master.substream("kmeans", {eidx, 5});
          rec.ovr_5cls = metrics::ovr_cls(store, result.central, reps_per_layer,
                                          k_5cls, krng5, &per_layer);
          acc_5cls.add(*rec.ovr_5cls, per_layer);
        }
      } catch (const std::domain_error&) {
        // no valid (node, layer) pairs this epoch
      }
    }

    Gradients grads = backward(result.params, g, cache, g.labels, g.train_mask);
    if (!cfg.mu_trainable) grads.mu = 0.0;
    adam_step(result.params, grads, adam, cfg.lr);

    result.history.push_back(rec);
    if (hooks && hooks->on_epoch) hooks->on_epoch(rec);
  }

  result.epochs_run = cfg.epochs;
  result.overlap.valid = acc_node.count > 0;
  result.overlap.ovr_node = acc_node.mean();
  result.overlap.ovr_cls = acc_cls.mean();
  result.overlap.ovr_5cls = acc_5cls.mean();
  result.overlap.per_layer_node = acc_node.layer_means();
  result.overlap.per_layer_cls = acc_cls.layer_means();
  result.overlap.per_layer_5cls = acc_5cls.layer_means();
  result.overlap.k_cls = k_cls;
  result.overlap.k_5cls = k_5cls;
  return result;
}

}  // namespace ldns::gnn
