#pragma once

#include <span>
#include <vector>

#include "ldns/clustering.hpp"
#include "ldns/graph.hpp"
#include "ldns/matrix.hpp"
#include "ldns/rng.hpp"

namespace ldns::dpp {

// L-ensemble over a candidate set: entry (j, j') couples per-node quality
// with pairwise diversity, so determinants of principal minors measure the
// squared volume spanned by the candidates' feature directions.
struct Kernel {
  int center = -1;
  std::vector<int> members;  // node ids, ordered as matrix rows
  Matrix matrix;             // |members| x |members|, symmetric
};

// Eigendecomposition of a Kernel.  Rows of `vectors` correspond to candidate
// nodes, columns to eigenvectors (ascending eigenvalue order).  After
// squeezing, columns are no longer orthonormal and `squeezed` is set;
// `eigenvalues` always stay those of the original kernel.
struct EigenBasis {
  std::vector<int> members;
  std::vector<double> eigenvalues;  // clamped >= 0, ascending
  Matrix vectors;                   // S x S
  bool squeezed = false;
  // Per-row norm ratio accumulated across squeezes (empty = all ones).  The
  // sampler re-imposes this profile on its working set after each selection
  // step: re-orthonormalization only remembers the spanned subspace, and
  // without the re-imposition the squeeze would stop acting after the first
  // pick of a draw.
  std::vector<double> row_damping;

  int positive_count() const {
    int c = 0;
    for (double l : eigenvalues)
      if (l > 0.0) ++c;
    return c;
  }
};

// e[l][v] = elementary symmetric polynomial of degree l over the first v
// eigenvalues, built by e[l][v] = e[l][v-1] + lambda_v * e[l-1][v-1].
struct ESPTable {
  int k = 0;
  int size = 0;
  Matrix e;  // (k+1) x (size+1)
  double at(int l, int v) const { return e(l, v); }
};

// Per-layer, per-node negative sample sets collected across a forward pass.
struct SampleStore {
  int num_layers = 0;
  int num_nodes = 0;
  std::vector<std::vector<std::vector<int>>> sets;  // [layer-1][node]

  SampleStore() = default;
  SampleStore(int layers, int nodes)
      : num_layers(layers),
        num_nodes(nodes),
        sets(layers, std::vector<std::vector<int>>(nodes)) {}

  std::vector<int>& at(int layer, int node) { return sets[layer - 1][node]; }
  const std::vector<int>& at(int layer, int node) const {
    return sets[layer - 1][node];
  }
  bool any_samples() const {
    for (const auto& layer : sets)
      for (const auto& s : layer)
        if (!s.empty()) return true;
    return false;
  }
};

// cos(a_i,b_i) * cos(a_i,a_j); pushes mass onto candidates dissimilar to the
// center's own community profile.
double quality_term(std::span<const double> a_i, std::span<const double> b_i,
                    std::span<const double> a_j);

// cos(h_j,a_j') * cos(a_j,h_j') * exp(cos(h_j,h_j') - 1)
double diversity_term(std::span<const double> h_j, std::span<const double> h_jp,
                      std::span<const double> a_j, std::span<const double> a_jp);

Kernel build_kernel(const graph::Graph& g, const Matrix& reps,
                    const graph::CandidateSet& s, const cluster::Communities& c);

// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
// 1e-10 * ||L||_F (error after 100 sweeps).  Eigenvalues below
// 1e-12 * max(lambda) are clamped to zero.
EigenBasis eig_sym(const Kernel& k);

ESPTable esp(const std::vector<double>& eigenvalues, int k);

// Draw an exact k-DPP sample.  Phase 1 picks an eigenvector index set by the
// standard elementary-symmetric-polynomial Bernoulli scan over the ORIGINAL
// eigenvalues; phase 2 walks the (possibly squeezed) vector set, selecting
// items with probability proportional to the summed squared coordinate and
// re-orthonormalizing against the chosen axis.  Returns k member node ids.
std::vector<int> sample_kdpp(const EigenBasis& basis, int k, Rng& rng);

// Rank-one row squeeze: with m the column where |row jstar| peaks,
// V' = V - gamma * V[:,m] (x) V[jstar,:] / V[jstar,m].
// Shrinks row jstar's norm by exactly (1-gamma); rows with norm below 1e-12
// are left untouched.
EigenBasis squeeze(const EigenBasis& basis, int jstar_row, double gamma);

struct SampleDiag {
  int node = -1;
  int layer = 0;
  std::vector<int> members;
  std::vector<double> eigenvalues;
  std::vector<int> sampled;
  std::vector<int> squeezed_rows;  // row indices into members
};

// One layer-diverse draw: build kernel, eigendecompose, squeeze away every
// previous-layer sample still present in the candidate set, then k-DPP.
// |members| < k returns all members; k is reduced (with a one-time warning)
// when it exceeds the kernel's positive rank.
std::vector<int> layer_diverse_sample(const graph::Graph& g, const Matrix& reps,
                                      const graph::CandidateSet& s,
                                      const std::vector<int>& prev, int k,
                                      double gamma, Rng& rng,
                                      const cluster::Communities& c,
                                      SampleDiag* diag = nullptr);

// Baseline that ignores the previous layer entirely (no squeezing).
std::vector<int> sample_independent(const graph::Graph& g, const Matrix& reps,
                                    const graph::CandidateSet& s,
                                    const std::vector<int>& prev, int k,
                                    double gamma, Rng& rng,
                                    const cluster::Communities& c,
                                    SampleDiag* diag = nullptr);

}  // namespace ldns::dpp
