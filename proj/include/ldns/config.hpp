#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ldns {

enum class SamplerKind { kLayerDiverse, kIndependent, kNone };

std::string to_string(SamplerKind s);
SamplerKind sampler_from_string(const std::string& s);

struct ExperimentConfig {
  std::string dataset_dir;
  int layers = 2;
  int hidden = 16;
  double lr = 0.02;
  int epochs = 200;
  std::uint64_t seed = 1;
  double gamma = 0.9;
  double k_fraction = 0.2;         // per-node sample size = ceil(k_fraction * |S_i|)
  double central_fraction = 0.01;  // share of nodes receiving negative samples
  SamplerKind sampler = SamplerKind::kLayerDiverse;
  int q_communities = 0;  // 0: number of label classes, else ceil(sqrt(N))
  std::vector<int> cls_multipliers = {1, 5};
  int path_length = 6;
  double mu_init = 0.5;
  bool mu_trainable = true;

  void validate() const;  // throws std::invalid_argument on out-of-range fields
};

ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& c);

}  // namespace ldns
