#include "ldns/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldns/simd.hpp"

namespace ldns::gnn {

namespace {

std::vector<double> inv_sqrt_degrees(const graph::Graph& g) {
  std::vector<double> inv(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i)
    inv[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
  return inv;
}

const LayerNegatives kNoNegatives;

// out[i] = sum_{j in N(i)+{i}} c_ij x[j] - mu * sum_{jbar in negs[i]} c_ijbar x[jbar]
Matrix aggregate(const Matrix& x, const graph::Graph& g, const LayerNegatives& negs,
                 double mu) {
  const auto inv = inv_sqrt_degrees(g);
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < g.num_nodes; ++i) {
    simd::axpy(inv[i] * inv[i], x.row(i), out.row(i), x.cols());
    for (int j : g.adj[i]) simd::axpy(inv[i] * inv[j], x.row(j), out.row(i), x.cols());
    if (mu != 0.0 && !negs.empty()) {
      for (int jb : negs[i])
        simd::axpy(-mu * inv[i] * inv[jb], x.row(jb), out.row(i), x.cols());
    }
  }
  return out;
}

// transpose of `aggregate` as a linear map in x
Matrix aggregate_transpose(const Matrix& grad, const graph::Graph& g,
                           const LayerNegatives& negs, double mu) {
  const auto inv = inv_sqrt_degrees(g);
  Matrix out(grad.rows(), grad.cols());
  for (int i = 0; i < g.num_nodes; ++i) {
    simd::axpy(inv[i] * inv[i], grad.row(i), out.row(i), grad.cols());
    for (int j : g.adj[i]) simd::axpy(inv[i] * inv[j], grad.row(i), out.row(j), grad.cols());
    if (mu != 0.0 && !negs.empty()) {
      for (int jb : negs[i])
        simd::axpy(-mu * inv[i] * inv[jb], grad.row(i), out.row(jb), grad.cols());
    }
  }
  return out;
}

}  // namespace

ModelParams init_params(int in_dim, int hidden_dim, int out_dim, int layers,
                        double mu_init, Rng& rng) {
  if (layers < 1) throw std::invalid_argument("init_params: layers must be >= 1");
  ModelParams p;
  p.mu = mu_init;
  for (int l = 0; l < layers; ++l) {
    const int fin = l == 0 ? in_dim : hidden_dim;
    const int fout = l == layers - 1 ? out_dim : hidden_dim;
    Matrix w(fin, fout);
    const double a = std::sqrt(6.0 / (fin + fout));  // Glorot uniform
    for (int i = 0; i < fin; ++i)
      for (int j = 0; j < fout; ++j) w(i, j) = rng.uniform(-a, a);
    p.weights.push_back(std::move(w));
  }
  return p;
}

Matrix gcn_layer_forward(const Matrix& h, const graph::Graph& g, const Matrix& w) {
  return aggregate(matmul(h, w), g, kNoNegatives, 0.0);
}

Matrix neg_gcn_layer_forward(const Matrix& h, const graph::Graph& g,
                             const Matrix& w, const LayerNegatives& negs,
                             double mu) {
  return aggregate(matmul(h, w), g, negs, mu);
}

Matrix neg_aggregate(const Matrix& x, const graph::Graph& g,
                     const LayerNegatives& negs, double mu) {
  return aggregate(x, g, negs, mu);
}

Matrix forward(const ModelParams& params, const graph::Graph& g,
               const dpp::SampleStore& store, ForwardCache* cache) {
  const int layers = params.num_layers();
  Matrix h = g.features;
  if (cache) {
    cache->activations.assign(1, h);
    cache->linear.clear();
    cache->preact.clear();
    cache->store = &store;
  }
  for (int l = 1; l <= layers; ++l) {
    Matrix m = matmul(h, params.weights[l - 1]);
    const bool has_layer = store.num_layers >= l;
    Matrix z = aggregate(m, g, has_layer ? store.sets[l - 1] : kNoNegatives,
                         params.mu);
    if (cache) {
      cache->linear.push_back(std::move(m));
      cache->preact.push_back(z);
    }
    if (l < layers) relu_inplace(z);
    if (cache) cache->activations.push_back(z);
    h = std::move(z);
  }
  return h;
}

namespace {

// softmax cross-entropy value and d(loss)/d(logits) over a node mask
double ce_and_grad(const Matrix& logits, const std::vector<int>& labels,
                   const std::vector<int>& mask, Matrix* grad) {
  if (mask.empty()) throw std::invalid_argument("cross_entropy: empty mask");
  const std::size_t c = logits.cols();
  if (grad) *grad = Matrix(logits.rows(), c);
  double loss = 0.0;
  std::vector<double> prob(c);
  for (int i : mask) {
    const double* row = logits.row(i);
    const int y = labels[i];
    if (y < 0 || y >= static_cast<int>(c))
      throw std::invalid_argument("cross_entropy: mask node lacks a valid label");
    double mx = row[0];
    for (std::size_t f = 1; f < c; ++f) mx = std::max(mx, row[f]);
    double z = 0.0;
    for (std::size_t f = 0; f < c; ++f) {
      prob[f] = std::exp(row[f] - mx);
      z += prob[f];
    }
    loss -= std::log(prob[y] / z);
    if (grad) {
      double* grow = grad->row(i);
      for (std::size_t f = 0; f < c; ++f) grow[f] = prob[f] / z / mask.size();
      grow[y] -= 1.0 / mask.size();
    }
  }
  return loss / mask.size();
}

}  // namespace

double cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                     const std::vector<int>& mask) {
  return ce_and_grad(logits, labels, mask, nullptr);
}

Gradients backward(const ModelParams& params, const graph::Graph& g,
                   const ForwardCache& cache, const std::vector<int>& labels,
                   const std::vector<int>& mask) {
  const int layers = params.num_layers();
  const dpp::SampleStore& store = *cache.store;
  const auto inv = inv_sqrt_degrees(g);

  Gradients grads;
  grads.weights.resize(layers);
  grads.mu = 0.0;
  if (mask.empty()) {  // nothing to fit: all gradients vanish
    for (int l = 0; l < layers; ++l)
      grads.weights[l] =
          Matrix(params.weights[l].rows(), params.weights[l].cols());
    return grads;
  }

  Matrix gz;  // d(loss)/d(Z_l)
  ce_and_grad(cache.activations.back(), labels, mask, &gz);

  for (int l = layers; l >= 1; --l) {
    const LayerNegatives& negs =
        store.num_layers >= l ? store.sets[l - 1] : kNoNegatives;

    // dZ/dmu = -B_l M_l
    if (!negs.empty()) {
      const Matrix& m = cache.linear[l - 1];
      for (int i = 0; i < g.num_nodes; ++i) {
        for (int jb : negs[i])
          grads.mu -= inv[i] * inv[jb] * simd::dot(gz.row(i), m.row(jb), m.cols());
      }
    }

    Matrix gm = aggregate_transpose(gz, g, negs, params.mu);
    grads.weights[l - 1] = matmul_at_b(cache.activations[l - 1], gm);
    if (l > 1) {
      gz = matmul_a_bt(gm, params.weights[l - 1]);
      relu_backward_inplace(gz, cache.preact[l - 2]);
    }
  }
  return grads;
}

AdamState init_adam(const ModelParams& params) {
  AdamState s;
  for (const auto& w : params.weights) {
    s.m.emplace_back(w.rows(), w.cols());
    s.v.emplace_back(w.rows(), w.cols());
  }
  return s;
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  auto update = [&](double& param, double g, double& m, double& v) {
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g * g;
    param -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
  };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    Matrix& w = params.weights[l];
    const Matrix& gw = grads.weights[l];
    const std::size_t n = w.rows() * w.cols();
    for (std::size_t i = 0; i < n; ++i)
      update(w.data()[i], gw.data()[i], state.m[l].data()[i], state.v[l].data()[i]);
  }
  update(params.mu, grads.mu, state.m_mu, state.v_mu);
  params.mu = std::max(0.0, params.mu);  // mu stays non-negative
}

std::vector<double> aggregate_max(const std::vector<std::vector<double>>& values) {
  if (values.empty()) throw std::invalid_argument("aggregate_max: empty multiset");
  std::vector<double> out = values.front();
  for (const auto& v : values) {
    if (v.size() != out.size())
      throw std::invalid_argument("aggregate_max: dimension mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], v[i]);
  }
  return out;
}

std::vector<double> aggregate_mean(const std::vector<std::vector<double>>& values) {
  if (values.empty()) throw std::invalid_argument("aggregate_mean: empty multiset");
  std::vector<double> out(values.front().size(), 0.0);
  for (const auto& v : values) {
    if (v.size() != out.size())
      throw std::invalid_argument("aggregate_mean: dimension mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  for (double& x : out) x /= values.size();
  return out;
}

namespace {

double agg_max(std::initializer_list<double> xs) {
  std::vector<std::vector<double>> vs;
  for (double x : xs) vs.push_back({x});
  return aggregate_max(vs)[0];
}

double agg_mean(std::initializer_list<double> xs) {
  std::vector<std::vector<double>> vs;
  for (double x : xs) vs.push_back({x});
  return aggregate_mean(vs)[0];
}

}  // namespace

std::vector<CaseCheck> run_expressivity_cases() {
  std::vector<CaseCheck> out;
  auto check = [&](const std::string& id, bool pass, const std::string& detail) {
    out.push_back({id, detail, pass});
  };
  const double mus[] = {0.25, 0.5, 1.0};

  // Case 1a: MAX alone cannot separate the two neighbourhoods
  check("case1a-max-indistinct", agg_max({2, 2, 1}) == agg_max({2, 1}),
        "max{2,2,1} == max{2,1}");
  {
    bool ok = true;
    for (double mu : mus)
      ok = ok && (2 - mu * agg_max({2, 2, 0}) != 2 - mu * agg_max({0, 1}));
    check("case1a-max-negatives-distinct", ok,
          "2 - mu*max{2,2,0} != 2 - mu*max{0,1} for mu > 0");
  }

  // Case 1b: MAX and MEAN both fail before negatives are added
  check("case1b-max-indistinct", agg_max({1, 1, 2, 2}) == agg_max({2, 1}),
        "max{1,1,2,2} == max{2,1}");
  check("case1b-mean-indistinct", agg_mean({1, 1, 2, 2}) == agg_mean({1, 2}),
        "mean{1,1,2,2} == mean{1,2}");
  {
    bool okx = true, okm = true;
    for (double mu : mus) {
      okx = okx && (2 - mu * agg_max({1, 1, 2, 0}) != 2 - mu * agg_max({0, 1}));
      okm = okm && (1.5 - mu * agg_mean({1, 1, 0, 2}) != 1.5 - mu * agg_mean({0, 1}));
    }
    check("case1b-max-negatives-distinct", okx,
          "2 - mu*max{1,1,2,0} != 2 - mu*max{0,1} for mu > 0");
    check("case1b-mean-negatives-distinct", okm,
          "3/2 - mu*mean{1,1,0,2} != 3/2 - mu*mean{0,1} for mu > 0");
  }

  // Case 2: one draw can still coincide; the next layer's diverse draw separates
  {
    bool okx = true, okm = true;
    for (double mu : mus) {
      okx = okx && (agg_max({1, 1, 2, 2}) - mu * agg_max({1, 1, 0, 2}) ==
                    agg_max({1, 2}) - mu * agg_max({0, 2}));
      okm = okm && (agg_mean({1, 1, 2, 2}) - mu * agg_mean({1, 1, 0, 2}) ==
                    agg_mean({1, 2}) - mu * agg_mean({0, 2}));
    }
    check("case2-prev-layer-max-still-equal", okx,
          "max{1,1,2,2} - mu*max{1,1,0,2} == max{1,2} - mu*max{0,2}");
    check("case2-prev-layer-mean-still-equal", okm,
          "mean{1,1,2,2} - mu*mean{1,1,0,2} == mean{1,2} - mu*mean{0,2}");
  }
  {
    bool okx = true, okm = true;
    for (double mu : mus) {
      okx = okx && (agg_max({1, 1, 2, 2}) - mu * agg_max({1, 0, 2, 2}) !=
                    agg_max({1, 2}) - mu * agg_max({1, 0}));
      okm = okm && (agg_mean({1, 1, 2, 2}) - mu * agg_mean({1, 0, 2, 2}) !=
                    agg_mean({1, 2}) - mu * agg_mean({1, 0}));
    }
    check("case2-next-layer-max-distinct", okx,
          "max{1,1,2,2} - mu*max{1,0,2,2} != max{1,2} - mu*max{1,0} for mu > 0");
    check("case2-next-layer-mean-distinct", okm,
          "mean{1,1,2,2} - mu*mean{1,0,2,2} != mean{1,2} - mu*mean{1,0} for mu > 0");
  }

  // Case 3: separable structures, an exact mu = 1 collapse, and its recovery
  check("case3-base-max-distinct", agg_max({1, 1, 2, 3}) != agg_max({1, 2}),
        "max{1,1,2,3} != max{1,2}");
  check("case3-base-mean-distinct", agg_mean({1, 1, 2, 3}) != agg_mean({1, 2}),
        "mean{1,1,2,3} != mean{1,2}");
  {
    auto v = [&](double mu) { return agg_mean({1, 1, 2, 3}) - mu * agg_mean({1, 3, 0, 3}); };
    auto vp = [&](double mu) { return agg_mean({1, 2}) - mu * agg_mean({0, 3}); };
    check("case3-collapse-at-mu-1", v(1.0) == vp(1.0) && v(1.0) == 0.0,
          "7/4 - mu*7/4 meets 3/2 - mu*3/2 only at mu = 1, where both vanish");
    check("case3-distinct-off-collapse", v(0.25) != vp(0.25) && v(0.5) != vp(0.5),
          "the collapse needs mu to exactly cancel both aggregations");
    check("case3-next-layer-recovers",
          agg_mean({1, 1, 2, 3}) - 1.0 * agg_mean({1, 0, 2, 2}) !=
              agg_mean({1, 2}) - 1.0 * agg_mean({0, 1}),
          "7/4 - mean{1,0,2,2} != 3/2 - mean{0,1} at mu = 1");
  }
  return out;
}

}  // namespace ldns::gnn
