#include "ldns/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ldns {

using nlohmann::json;

std::string to_string(SamplerKind s) {
  switch (s) {
    case SamplerKind::kLayerDiverse:
      return "layer-diverse";
    case SamplerKind::kIndependent:
      return "independent";
    case SamplerKind::kNone:
      return "none";
  }
  return "?";
}

SamplerKind sampler_from_string(const std::string& s) {
  if (s == "layer-diverse") return SamplerKind::kLayerDiverse;
  if (s == "independent") return SamplerKind::kIndependent;
  if (s == "none") return SamplerKind::kNone;
  throw std::invalid_argument("unknown sampler '" + s +
                              "' (expected layer-diverse|independent|none)");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (layers < 1) fail("layers must be >= 1");
  if (hidden < 1) fail("hidden must be >= 1");
  if (lr <= 0.0) fail("lr must be > 0");
  if (epochs < 1) fail("epochs must be >= 1");
  if (gamma < 0.0 || gamma > 1.0) fail("gamma must lie in [0, 1]");
  if (k_fraction <= 0.0 || k_fraction > 1.0) fail("k_fraction must lie in (0, 1]");
  if (central_fraction <= 0.0 || central_fraction > 1.0)
    fail("central_fraction must lie in (0, 1]");
  if (path_length < 2) fail("path_length must be >= 2");
  if (q_communities < 0) fail("q_communities must be >= 0");
  if (mu_init < 0.0) fail("mu_init must be >= 0");
  if (cls_multipliers.empty()) fail("cls_multipliers must be nonempty");
  for (int m : cls_multipliers)
    if (m < 1) fail("cls_multipliers entries must be >= 1");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  ExperimentConfig c;
  c.dataset_dir = j.value("dataset_dir", c.dataset_dir);
  c.layers = j.value("layers", c.layers);
  c.hidden = j.value("hidden", c.hidden);
  c.lr = j.value("lr", c.lr);
  c.epochs = j.value("epochs", c.epochs);
  c.seed = j.value("seed", c.seed);
  c.gamma = j.value("gamma", c.gamma);
  c.k_fraction = j.value("k_fraction", c.k_fraction);
  c.central_fraction = j.value("central_fraction", c.central_fraction);
  if (j.contains("sampler")) c.sampler = sampler_from_string(j["sampler"]);
  c.q_communities = j.value("q_communities", c.q_communities);
  if (j.contains("cls_multipliers"))
    c.cls_multipliers = j["cls_multipliers"].get<std::vector<int>>();
  c.path_length = j.value("path_length", c.path_length);
  c.mu_init = j.value("mu_init", c.mu_init);
  c.mu_trainable = j.value("mu_trainable", c.mu_trainable);
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["dataset_dir"] = c.dataset_dir;
  j["layers"] = c.layers;
  j["hidden"] = c.hidden;
  j["lr"] = c.lr;
  j["epochs"] = c.epochs;
  j["seed"] = c.seed;
  j["gamma"] = c.gamma;
  j["k_fraction"] = c.k_fraction;
  j["central_fraction"] = c.central_fraction;
  j["sampler"] = to_string(c.sampler);
  j["q_communities"] = c.q_communities;
  j["cls_multipliers"] = c.cls_multipliers;
  j["path_length"] = c.path_length;
  j["mu_init"] = c.mu_init;
  j["mu_trainable"] = c.mu_trainable;
  return j.dump(2);
}

}  // namespace ldns
