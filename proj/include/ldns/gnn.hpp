#pragma once

#include <string>
#include <vector>

#include "ldns/dpp.hpp"
#include "ldns/graph.hpp"
#include "ldns/matrix.hpp"
#include "ldns/rng.hpp"

namespace ldns::gnn {

// Dense GCN with an optional subtractive negative-sample term per layer:
//   h_i = sum_{j in N(i)+{i}} (deg~(i) deg~(j))^{-1/2} W h_j
//       - mu * sum_{jbar in negs(i)} (deg~(i) deg~(jbar))^{-1/2} W h_jbar
// with deg~ = degree + 1 (self-loop counted).  mu is a single trainable
// scalar shared across layers, clamped to [0, inf) after each update.

struct ModelParams {
  std::vector<Matrix> weights;  // weights[l]: F_l x F_{l+1}
  double mu = 0.5;

  int num_layers() const { return static_cast<int>(weights.size()); }
};

ModelParams init_params(int in_dim, int hidden_dim, int out_dim, int layers,
                        double mu_init, Rng& rng);

using LayerNegatives = std::vector<std::vector<int>>;  // node -> sample ids

Matrix gcn_layer_forward(const Matrix& h, const graph::Graph& g, const Matrix& w);
Matrix neg_gcn_layer_forward(const Matrix& h, const graph::Graph& g,
                             const Matrix& w, const LayerNegatives& negs,
                             double mu);

// Aggregation applied to an already-projected matrix x = H W.
Matrix neg_aggregate(const Matrix& x, const graph::Graph& g,
                     const LayerNegatives& negs, double mu);

struct ForwardCache {
  std::vector<Matrix> activations;  // H_0 .. H_L (H_L = logits)
  std::vector<Matrix> linear;       // M_l = H_{l-1} W_l
  std::vector<Matrix> preact;       // Z_l = Agg_l(M_l)
  const dpp::SampleStore* store = nullptr;
};

// ReLU between layers, nothing after the last; softmax lives in the loss.
Matrix forward(const ModelParams& params, const graph::Graph& g,
               const dpp::SampleStore& store, ForwardCache* cache = nullptr);

double cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                     const std::vector<int>& mask);

struct Gradients {
  std::vector<Matrix> weights;
  double mu = 0.0;
};

// Exact reverse-mode gradients of the mean train-mask cross-entropy; sample
// sets are constants with respect to differentiation.
Gradients backward(const ModelParams& params, const graph::Graph& g,
                   const ForwardCache& cache, const std::vector<int>& labels,
                   const std::vector<int>& mask);

struct AdamState {
  std::vector<Matrix> m, v;
  double m_mu = 0.0, v_mu = 0.0;
  long t = 0;
};

AdamState init_adam(const ModelParams& params);
void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               double lr = 0.02, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

// Element-wise aggregators used by the standalone expressivity checks.
std::vector<double> aggregate_max(const std::vector<std::vector<double>>& values);
std::vector<double> aggregate_mean(const std::vector<std::vector<double>>& values);

struct CaseCheck {
  std::string id;
  std::string detail;
  bool pass = false;
};

// Evaluates the aggregator case studies on their fixed toy neighbourhoods:
// structures MAX/MEAN cannot tell apart, how subtracted negatives separate
// them, the mu = 1 collapse, and its recovery one layer later.
std::vector<CaseCheck> run_expressivity_cases();

}  // namespace ldns::gnn
