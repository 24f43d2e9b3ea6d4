// Command-line front end: train / sample / synth / verify.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldns/config.hpp"
#include "ldns/dpp.hpp"
#include "ldns/gnn.hpp"
#include "ldns/graph_io.hpp"
#include "ldns/metrics.hpp"
#include "ldns/synth.hpp"
#include "ldns/train.hpp"
#include "ldns/verify.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const ldns::gnn::EpochRecord& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  json j;
  j["epoch"] = r.epoch;
  j["loss"] = r.loss;
  j["train_acc"] = r.train_acc;
  j["val_acc"] = opt(r.val_acc);
  j["test_acc"] = opt(r.test_acc);
  j["ovr_node"] = opt(r.ovr_node);
  j["ovr_cls"] = opt(r.ovr_cls);
  j["ovr_5cls"] = opt(r.ovr_5cls);
  j["mad"] = r.mad;
  return j;
}

json overlap_to_json(const ldns::metrics::OverlapReport& o) {
  json j;
  j["valid"] = o.valid;
  j["ovr_node"] = o.ovr_node;
  j["ovr_cls"] = o.ovr_cls;
  j["ovr_5cls"] = o.ovr_5cls;
  j["per_layer_node"] = o.per_layer_node;
  j["per_layer_cls"] = o.per_layer_cls;
  j["per_layer_5cls"] = o.per_layer_5cls;
  j["k_cls"] = o.k_cls;
  j["k_5cls"] = o.k_5cls;
  return j;
}

std::string default_run_dir(std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::localtime(&t));
  return "runs/" + std::string(stamp) + "-" + std::to_string(seed);
}

void write_checkpoint(const ldns::gnn::ModelParams& params, int epoch,
                      std::uint64_t seed, const std::string& path) {
  json j;
  j["schema"] = 1;
  j["epoch"] = epoch;
  j["seed"] = seed;
  j["mu"] = params.mu;
  json layers = json::array();
  for (const auto& w : params.weights) {
    json lw;
    lw["rows"] = w.rows();
    lw["cols"] = w.cols();
    lw["data"] = std::vector<double>(w.data(), w.data() + w.rows() * w.cols());
    layers.push_back(std::move(lw));
  }
  j["layers"] = std::move(layers);
  std::ofstream(path) << j.dump() << "\n";
}

struct ConfigCli {
  std::string config_path;
  ldns::ExperimentConfig cfg;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--dataset", cfg.dataset_dir, "dataset directory");
    app->add_option("--layers", cfg.layers, "GCN depth");
    app->add_option("--hidden", cfg.hidden, "hidden width");
    app->add_option("--lr", cfg.lr, "Adam learning rate");
    app->add_option("--epochs", cfg.epochs, "training epochs");
    app->add_option("--seed", cfg.seed, "master seed");
    app->add_option("--gamma", cfg.gamma, "squeeze strength in [0,1]");
    app->add_option("--k-fraction", cfg.k_fraction, "sample size fraction of |S_i|");
    app->add_option("--central-fraction", cfg.central_fraction,
                    "fraction of nodes given negative samples");
    app->add_option("--sampler", sampler_, "layer-diverse|independent|none");
    app->add_option("--q-communities", cfg.q_communities, "community count (0 = auto)");
    app->add_option("--path-length", cfg.path_length, "max shortest-path ring P");
    app->add_option("--mu-init", cfg.mu_init, "initial mu");
    app->add_flag("--mu-frozen", mu_frozen_, "do not train mu");
  }

  // file first, then flags win
  ldns::ExperimentConfig resolve(const CLI::App& app) {
    ldns::ExperimentConfig base;
    if (!config_path.empty()) base = ldns::load_config(config_path);
    auto take = [&](const std::string& flag, auto member, auto value) {
      if (app.count(flag) > 0) base.*member = value;
    };
    take("--dataset", &ldns::ExperimentConfig::dataset_dir, cfg.dataset_dir);
    take("--layers", &ldns::ExperimentConfig::layers, cfg.layers);
    take("--hidden", &ldns::ExperimentConfig::hidden, cfg.hidden);
    take("--lr", &ldns::ExperimentConfig::lr, cfg.lr);
    take("--epochs", &ldns::ExperimentConfig::epochs, cfg.epochs);
    take("--seed", &ldns::ExperimentConfig::seed, cfg.seed);
    take("--gamma", &ldns::ExperimentConfig::gamma, cfg.gamma);
    take("--k-fraction", &ldns::ExperimentConfig::k_fraction, cfg.k_fraction);
    take("--central-fraction", &ldns::ExperimentConfig::central_fraction,
         cfg.central_fraction);
    take("--q-communities", &ldns::ExperimentConfig::q_communities, cfg.q_communities);
    take("--path-length", &ldns::ExperimentConfig::path_length, cfg.path_length);
    take("--mu-init", &ldns::ExperimentConfig::mu_init, cfg.mu_init);
    if (app.count("--sampler") > 0) base.sampler = ldns::sampler_from_string(sampler_);
    if (mu_frozen_) base.mu_trainable = false;
    base.validate();
    return base;
  }

 private:
  std::string sampler_;
  bool mu_frozen_ = false;
};

int cmd_train(const ldns::ExperimentConfig& cfg, std::string out_dir,
              bool dump_samples) {
  if (cfg.dataset_dir.empty()) {
    std::cerr << "train: no dataset directory (use --dataset or config)\n";
    return 2;
  }
  const auto g = ldns::graph::load_dataset_dir(cfg.dataset_dir);
  if (out_dir.empty()) out_dir = default_run_dir(cfg.seed);
  fs::create_directories(out_dir);
  std::ofstream(out_dir + "/config.json") << ldns::config_to_json(cfg) << "\n";

  std::ofstream history(out_dir + "/history.jsonl");
  std::ofstream samples;
  if (dump_samples) samples.open(out_dir + "/samples.jsonl");

  ldns::gnn::TrainHooks hooks;
  hooks.on_epoch = [&](const ldns::gnn::EpochRecord& r) {
    history << to_json(r).dump() << "\n";
  };
  if (dump_samples) {
    hooks.on_sample = [&](int epoch, int layer, const ldns::dpp::SampleDiag& d) {
      json j;
      j["epoch"] = epoch;
      j["layer"] = layer;
      j["node"] = d.node;
      j["members"] = d.members;
      j["eigenvalues"] = d.eigenvalues;
      j["sampled"] = d.sampled;
      j["squeezed_rows"] = d.squeezed_rows;
      samples << j.dump() << "\n";
    };
  }

  const auto result = ldns::gnn::train(g, cfg, &hooks);
  write_checkpoint(result.params, result.epochs_run, cfg.seed,
                   out_dir + "/checkpoint.json");

  const auto& last = result.history.back();
  json summary;
  summary["schema"] = 1;
  summary["seed"] = cfg.seed;
  summary["config"] = json::parse(ldns::config_to_json(cfg));
  summary["epochs_run"] = result.epochs_run;
  summary["central_nodes"] = result.central;
  summary["final"] = to_json(last);
  summary["overlap"] = overlap_to_json(result.overlap);
  summary["mu"] = result.params.mu;
  std::ofstream(out_dir + "/summary.json") << summary.dump(2) << "\n";

  std::printf("run %s: loss %.4f train %.4f val %s test %s mu %.4f\n",
              out_dir.c_str(), last.loss, last.train_acc,
              last.val_acc ? std::to_string(*last.val_acc).c_str() : "-",
              last.test_acc ? std::to_string(*last.test_acc).c_str() : "-",
              result.params.mu);
  if (result.overlap.valid)
    std::printf("overlap: node %.4f cls %.4f 5cls %.4f\n", result.overlap.ovr_node,
                result.overlap.ovr_cls, result.overlap.ovr_5cls);
  return 0;
}

int cmd_sample(const ldns::ExperimentConfig& cfg, int node) {
  if (cfg.dataset_dir.empty()) {
    std::cerr << "sample: no dataset directory\n";
    return 2;
  }
  const auto g = ldns::graph::load_dataset_dir(cfg.dataset_dir);
  if (node < 0 || node >= g.num_nodes) {
    std::cerr << "sample: node " << node << " out of range [0," << g.num_nodes
              << ")\n";
    return 2;
  }
  const ldns::Rng master(cfg.seed);

  ldns::Rng cand_rng = master.substream("candidates", {0, static_cast<std::uint64_t>(node)});
  const auto cand = ldns::graph::build_candidate_set(g, node, cfg.path_length, cand_rng);
  if (!cand) {
    std::printf("node %d: candidate set empty -- skipped\n", node);
    return 0;
  }
  std::printf("node %d: %zu candidates (P=%d):", node, cand->members.size(),
              cfg.path_length);
  for (int m : cand->members) std::printf(" %d", m);
  std::printf("\n");

  ldns::Rng comm_rng = master.substream("communities", {0});
  const auto comms =
      ldns::gnn::partition_for_sampling(g, ldns::gnn::resolve_q(g, cfg), comm_rng);

  const int k = std::max(
      1, static_cast<int>(std::ceil(cfg.k_fraction * cand->members.size())));
  std::vector<int> prev;
  for (int l = 1; l <= cfg.layers; ++l) {
    ldns::Rng srng = master.substream(
        "sampling", {0, static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(node)});
    ldns::dpp::SampleDiag diag;
    std::vector<int> picks;
    if (cfg.sampler == ldns::SamplerKind::kIndependent) {
      picks = ldns::dpp::sample_independent(g, g.features, *cand, prev, k,
                                            cfg.gamma, srng, comms, &diag);
    } else {
      picks = ldns::dpp::layer_diverse_sample(g, g.features, *cand, prev, k,
                                              cfg.gamma, srng, comms, &diag);
    }
    if (l == 1) {
      std::printf("eigenvalues:");
      for (double v : diag.eigenvalues) std::printf(" %.6g", v);
      std::printf("\n");
    }
    std::printf("layer %d:", l);
    if (!diag.squeezed_rows.empty()) {
      std::printf(" squeezed rows [");
      for (std::size_t t = 0; t < diag.squeezed_rows.size(); ++t)
        std::printf("%s%d", t ? " " : "", diag.squeezed_rows[t]);
      std::printf("]");
    }
    std::printf(" sampled %zu:", picks.size());
    for (int p : picks) std::printf(" %d", p);
    std::printf("\n");
    prev = picks;
  }
  return 0;
}

std::vector<int> parse_blocks(const std::string& spec) {
  std::vector<int> sizes;
  const auto x = spec.find('x');
  if (x != std::string::npos) {
    const int count = std::stoi(spec.substr(0, x));
    const int size = std::stoi(spec.substr(x + 1));
    sizes.assign(count, size);
  } else {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
  }
  return sizes;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"layer-diverse negative sampling for graph convolutional networks"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train a model and write a run directory");
  ConfigCli train_cfg;
  train_cfg.attach(train);
  std::string out_dir;
  bool dump_samples = false;
  train->add_option("--out", out_dir, "run directory (default runs/<timestamp>-<seed>)");
  train->add_flag("--dump-samples", dump_samples, "write per-node sampling records");

  // sample
  auto* sample = app.add_subcommand("sample", "inspect candidate set and per-layer draws");
  ConfigCli sample_cfg;
  sample_cfg.attach(sample);
  int node = 0;
  sample->add_option("--node", node, "node id")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset directory");
  std::string kind = "sbm", blocks = "6x50", base_dir, synth_out = "data/synth";
  double p_in = 0.2, p_out = 0.01;
  int feature_dim = 8, q = 2;
  std::uint64_t synth_seed = 1;
  double train_frac = 0.1, val_frac = 0.45, test_frac = 0.45;
  synth->add_option("--kind", kind, "sbm|bottleneck")->required();
  synth->add_option("--blocks", blocks, "block spec, e.g. 6x50 or 40,40,60");
  synth->add_option("--p-in", p_in, "intra-block edge probability");
  synth->add_option("--p-out", p_out, "inter-block edge probability");
  synth->add_option("--feature-dim", feature_dim, "feature dimension");
  synth->add_option("--q", q, "communities for the bottleneck construction");
  synth->add_option("--base", base_dir, "bottleneck base dataset (default: generate)");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--train-frac", train_frac, "train split fraction");
  synth->add_option("--val-frac", val_frac, "val split fraction");
  synth->add_option("--test-frac", test_frac, "test split fraction");
  synth->add_option("--out", synth_out, "output dataset directory");

  // verify
  auto* verify = app.add_subcommand("verify", "run the oracle and property suites");
  bool fast = false;
  int draws = 200000;
  std::uint64_t verify_seed = 20240401;
  verify->add_flag("--fast", fast, "1k draws with widened distribution tolerance");
  verify->add_option("--draws", draws, "k-DPP draw count per kernel");
  verify->add_option("--seed", verify_seed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return cmd_train(train_cfg.resolve(*train), out_dir, dump_samples);
  if (sample->parsed()) return cmd_sample(sample_cfg.resolve(*sample), node);

  if (synth->parsed()) {
    ldns::Rng master(synth_seed);
    ldns::graph::Graph g;
    ldns::Rng gen_rng = master.substream("graph-gen");
    if (kind == "sbm") {
      g = ldns::graph::generate_sbm(parse_blocks(blocks), p_in, p_out, feature_dim,
                                    gen_rng);
    } else if (kind == "bottleneck") {
      ldns::graph::Graph base;
      if (!base_dir.empty()) {
        base = ldns::graph::load_dataset_dir(base_dir);
        if (!ldns::graph::is_connected(base))
          base = ldns::graph::largest_component_subgraph(base);
      } else {
        base = ldns::graph::generate_sbm(parse_blocks(blocks), p_in, p_out,
                                         feature_dim, gen_rng);
      }
      ldns::Rng brng = master.substream("bottleneck");
      g = ldns::graph::build_bottleneck_graph(base, q, brng);
    } else {
      std::cerr << "synth: unknown kind '" << kind << "'\n";
      return 2;
    }
    ldns::Rng srng = master.substream("splits");
    ldns::graph::assign_splits(g, train_frac, val_frac, test_frac, srng);
    ldns::graph::save_dataset_dir(g, synth_out);
    std::printf("wrote %s: %d nodes, %d edges, %d classes\n", synth_out.c_str(),
                g.num_nodes, g.num_edges(), g.num_classes());
    return 0;
  }

  if (verify->parsed()) {
    ldns::verify::Options opt;
    opt.seed = verify_seed;
    opt.draws = fast ? 1000 : draws;
    const auto results = ldns::verify::run_all(opt);
    bool all = true;
    for (const auto& r : results) {
      std::printf("%s: %-22s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                  r.detail.c_str());
      all = all && r.pass;
    }
    return all ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
