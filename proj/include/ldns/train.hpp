#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ldns/config.hpp"
#include "ldns/gnn.hpp"
#include "ldns/graph.hpp"
#include "ldns/metrics.hpp"

namespace ldns::gnn {

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double train_acc = 0.0;
  std::optional<double> val_acc;
  std::optional<double> test_acc;
  std::optional<double> ovr_node;
  std::optional<double> ovr_cls;
  std::optional<double> ovr_5cls;
  double mad = 0.0;
};

struct TrainHooks {
  std::function<void(const EpochRecord&)> on_epoch;
  std::function<void(int epoch, int layer, const dpp::SampleDiag&)> on_sample;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> history;
  metrics::OverlapReport overlap;  // means over epochs with valid overlap
  std::vector<int> central;
  int epochs_run = 0;
};

// Community cover for sampling: fluid communities on the largest component
// (q fluids), one extra community per remaining component.
cluster::Communities partition_for_sampling(const graph::Graph& g, int q, Rng& rng);

// q_communities resolution: configured value, else label class count, else
// ceil(sqrt(N)).
int resolve_q(const graph::Graph& g, const ExperimentConfig& cfg);

// One experiment: per epoch, rebuild candidate sets and communities, resample
// negatives layer by layer (chaining the previous layer's draw when the
// sampler is layer-diverse), run forward/backward and one Adam step, and
// record metrics.
TrainResult train(const graph::Graph& g, const ExperimentConfig& cfg,
                  const TrainHooks* hooks = nullptr);

}  // namespace ldns::gnn
