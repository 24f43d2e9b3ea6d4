#include "ldns/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "ldns/dpp.hpp"
#include "ldns/gnn.hpp"
#include "ldns/graph.hpp"
#include "ldns/matrix.hpp"
#include "ldns/oracle.hpp"
#include "ldns/rng.hpp"
#include "ldns/simd.hpp"
#include "ldns/synth.hpp"

namespace ldns::verify {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Matrix random_psd(int n, Rng& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  Matrix l(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int t = 0; t < n; ++t) s += a(t, i) * a(t, j);
      l(i, j) = s;
      l(j, i) = s;
    }
  return l;
}

dpp::Kernel as_kernel(Matrix l) {
  dpp::Kernel k;
  k.center = -1;
  k.members.resize(l.rows());
  std::iota(k.members.begin(), k.members.end(), 0);
  k.matrix = std::move(l);
  return k;
}

graph::Graph random_er_graph(int n, double p, int feat_dim, int classes, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  Matrix feats(n, feat_dim);
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < feat_dim; ++f) feats(i, f) = rng.normal();
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = rng.index(classes);
  return graph::make_graph(n, edges, std::move(feats), std::move(labels));
}

}  // namespace

SuiteResult kdpp_exactness(std::uint64_t seed, int draws, double tol) {
  Rng rng(seed);
  double worst = 0.0;
  int kernels = 0;
  for (int rep = 0; rep < 2; ++rep) {
    for (int s = 4; s <= 7; ++s) {
      for (int k = 1; k <= 3; ++k) {
        Matrix l = random_psd(s, rng);
        const auto exact = oracle::kdpp_exact_probs(l, k);
        const auto basis = dpp::eig_sym(as_kernel(std::move(l)));

        std::map<std::vector<int>, int> counts;
        Rng draw_rng = rng.substream("draws", {static_cast<std::uint64_t>(kernels)});
        for (int d = 0; d < draws; ++d) ++counts[dpp::sample_kdpp(basis, k, draw_rng)];

        for (const auto& [subset, p] : exact) {
          const auto it = counts.find(subset);
          const double emp = it == counts.end()
                                 ? 0.0
                                 : static_cast<double>(it->second) / draws;
          worst = std::max(worst, std::fabs(emp - p));
        }
        for (const auto& [subset, c] : counts) {
          if (!exact.count(subset))
            return {"kdpp-exactness", false, "sampler produced a subset with zero mass"};
          (void)c;
        }
        ++kernels;
      }
    }
  }
  return {"kdpp-exactness", worst < tol,
          fmt("Linf %.5f over %.0f kernels", worst, static_cast<double>(kernels)) +
              (tol > 0.0101 ? fmt(" (widened tolerance %.3f, reduced draws)", tol) : "")};
}

SuiteResult squeeze_row_scaling(std::uint64_t seed) {
  Rng rng(seed);
  const double gammas[] = {0.0, 0.25, 0.5, 0.9, 1.0};
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int s = 3 + rng.index(6);
    const auto basis = dpp::eig_sym(as_kernel(random_psd(s, rng)));
    const int jstar = rng.index(s);
    const double before = simd::nrm2(basis.vectors.row(jstar), s);
    for (double gamma : gammas) {
      const auto squeezed = dpp::squeeze(basis, jstar, gamma);
      const double after = simd::nrm2(squeezed.vectors.row(jstar), s);
      worst = std::max(worst, std::fabs(after - (1.0 - gamma) * before));
    }
  }
  return {"squeeze-row-scaling", worst < 1e-10, fmt("max |err| %.3e", worst)};
}

SuiteResult squeeze_similar_rows(std::uint64_t seed) {
  Rng rng(seed);
  double worst_dup = 0.0;
  bool sandwich_ok = true;
  std::string sandwich_detail;

  for (int rep = 0; rep < 60; ++rep) {
    const int s = 4 + rng.index(5);
    const int jstar = 0, ibar = 1;
    Matrix v(s, s);
    for (int r = 0; r < s; ++r)
      for (int c = 0; c < s; ++c) {
        double x = rng.uniform(0.2, 1.0);
        v(r, c) = rng.bernoulli(0.5) ? x : -x;  // bounded away from zero
      }

    dpp::EigenBasis base;
    base.members.resize(s);
    std::iota(base.members.begin(), base.members.end(), 0);
    base.eigenvalues.assign(s, 1.0);

    // duplicated row scales exactly like the squeezed row itself
    for (double gamma : {0.25, 0.5, 0.9}) {
      Matrix vd = v;
      for (int c = 0; c < s; ++c) vd(ibar, c) = vd(jstar, c);
      base.vectors = vd;
      const double before = simd::nrm2(vd.row(ibar), s);
      const auto sq = dpp::squeeze(base, jstar, gamma);
      const double after = simd::nrm2(sq.vectors.row(ibar), s);
      worst_dup = std::max(worst_dup, std::fabs(after - (1.0 - gamma) * before));
    }

    // delta-similar rows stay inside the sandwich bounds
    for (double delta : {0.01, 0.05}) {
      for (double gamma : {0.25, 0.5, 0.9}) {
        Matrix vs = v;
        for (int c = 0; c < s; ++c)
          vs(ibar, c) = vs(jstar, c) * rng.uniform(1.0 - delta, 1.0 + delta);
        base.vectors = vs;
        const double ref = simd::nrm2(vs.row(jstar), s);
        const auto sq = dpp::squeeze(base, jstar, gamma);
        const double after = simd::nrm2(sq.vectors.row(ibar), s);
        const double lo = std::max(0.0, (1.0 - delta) - gamma * (1.0 + delta)) * ref;
        const double hi = ((1.0 + delta) - gamma * (1.0 - delta)) * ref;
        if (after < lo - 1e-12 || after > hi + 1e-12) {
          sandwich_ok = false;
          sandwich_detail = fmt(" violation at delta=%.2f gamma=%.2f", delta, gamma);
        }
      }
    }
  }
  return {"squeeze-similar-rows", worst_dup < 1e-10 && sandwich_ok,
          fmt("dup-row max |err| %.3e", worst_dup) + sandwich_detail};
}

SuiteResult esp_vs_enumeration(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int rep = 0; rep < 40; ++rep) {
    const int s = 2 + rng.index(9);  // up to 10
    const int k = 1 + rng.index(std::min(4, s));
    std::vector<double> lam(s);
    for (double& x : lam) x = rng.uniform(0.0, 3.0);
    const auto table = dpp::esp(lam, k);
    const double brute = oracle::esp_bruteforce(lam, k);
    const double rel = std::fabs(table.at(k, s) - brute) / std::max(1.0, std::fabs(brute));
    worst = std::max(worst, rel);
  }
  return {"esp-vs-enumeration", worst < 1e-9, fmt("max rel err %.3e", worst)};
}

SuiteResult cauchy_binet(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 4; s <= 10; ++s) {
    for (int k = 1; k <= std::min(4, s); ++k) {
      const Matrix l = random_psd(s, rng);
      const double minor_sum = oracle::sum_principal_minors(l, k);
      const auto basis = dpp::eig_sym(as_kernel(l));
      const auto table = dpp::esp(basis.eigenvalues, k);
      const double rel = std::fabs(minor_sum - table.at(k, s)) /
                         std::max(1e-12, std::fabs(minor_sum));
      worst = std::max(worst, rel);
    }
  }
  return {"cauchy-binet", worst < 1e-6, fmt("max rel err %.3e", worst)};
}

SuiteResult det_nonnegativity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int s = 4 + rng.index(4);
    const int k = 1 + rng.index(3);
    const Matrix l = random_psd(s, rng);
    const auto basis = dpp::eig_sym(as_kernel(l));
    Rng draw_rng = rng.substream("draws", {static_cast<std::uint64_t>(rep)});
    for (int d = 0; d < 200; ++d) {
      const auto y = dpp::sample_kdpp(basis, k, draw_rng);
      worst = std::min(worst, oracle::determinant(oracle::principal_minor(l, y)));
    }
  }
  return {"det-nonnegativity", worst >= -1e-9, fmt("min det %.3e", worst)};
}

SuiteResult eig_reconstruction(std::uint64_t seed) {
  Rng rng(seed);
  double worst_recon = 0.0, worst_ortho = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int s = 2 + rng.index(9);
    const Matrix l = random_psd(s, rng);
    const auto basis = dpp::eig_sym(as_kernel(l));
    Matrix recon(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        double x = 0.0;
        for (int t = 0; t < s; ++t)
          x += basis.vectors(i, t) * basis.eigenvalues[t] * basis.vectors(j, t);
        recon(i, j) = x;
      }
    double diff = 0.0;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        const double d = recon(i, j) - l(i, j);
        diff += d * d;
      }
    worst_recon = std::max(worst_recon, std::sqrt(diff) / std::max(1e-12, frobenius_norm(l)));

    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) {
        double x = 0.0;
        for (int t = 0; t < s; ++t) x += basis.vectors(t, a) * basis.vectors(t, b);
        worst_ortho = std::max(worst_ortho, std::fabs(x - (a == b ? 1.0 : 0.0)));
      }
  }
  return {"eig-reconstruction", worst_recon < 1e-8 && worst_ortho < 1e-8,
          fmt("recon rel %.3e, ortho dev %.3e", worst_recon, worst_ortho)};
}

SuiteResult gradient_check(std::uint64_t seed) {
  double worst = 0.0;
  int fixtures_done = 0;
  for (int fixture = 0; fixtures_done < 20 && fixture < 200; ++fixture) {
    Rng rng(seed + 977 * fixture);
    const bool with_negs = fixtures_done % 2 == 1;
    const int n = 10, feat = 4, hidden = 5, classes = 3, layers = 2;
    const graph::Graph g = random_er_graph(n, 0.35, feat, classes, rng);

    gnn::ModelParams params =
        gnn::init_params(feat, hidden, classes, layers, 0.6, rng);
    dpp::SampleStore store(layers, n);
    if (with_negs) {
      for (int l = 1; l <= layers; ++l)
        for (int i = 0; i < n; ++i) {
          if (!rng.bernoulli(0.5)) continue;
          std::vector<int> non_nbrs;
          for (int j = 0; j < n; ++j)
            if (j != i && !g.has_edge(i, j)) non_nbrs.push_back(j);
          if (non_nbrs.size() < 2) continue;
          auto picks = rng.sample_without_replacement(
              static_cast<int>(non_nbrs.size()), 2);
          std::vector<int> negs{non_nbrs[picks[0]], non_nbrs[picks[1]]};
          std::sort(negs.begin(), negs.end());
          store.at(l, i) = std::move(negs);
        }
    }
    std::vector<int> mask{0, 1, 2, 3, 4, 5};

    gnn::ForwardCache cache;
    gnn::forward(params, g, store, &cache);
    // avoid fixtures whose preactivations graze the ReLU kink
    double closest = 1e9;
    for (int l = 0; l + 1 < layers; ++l)
      for (std::size_t t = 0; t < cache.preact[l].rows() * cache.preact[l].cols(); ++t)
        closest = std::min(closest, std::fabs(cache.preact[l].data()[t]));
    if (closest < 1e-3) continue;

    const auto grads = gnn::backward(params, g, cache, g.labels, mask);

    auto loss_at = [&]() {
      return gnn::cross_entropy(gnn::forward(params, g, store), g.labels, mask);
    };
    const double h = 1e-4;
    auto fd_check = [&](double& slot, double analytic) {
      const double keep = slot;
      slot = keep + h;
      const double up = loss_at();
      slot = keep - h;
      const double down = loss_at();
      slot = keep;
      const double fd = (up - down) / (2.0 * h);
      const double rel = std::fabs(analytic - fd) /
                         std::max({1.0, std::fabs(analytic), std::fabs(fd)});
      worst = std::max(worst, rel);
    };
    for (int l = 0; l < layers; ++l) {
      Matrix& w = params.weights[l];
      for (std::size_t t = 0; t < w.rows() * w.cols(); ++t)
        fd_check(w.data()[t], grads.weights[l].data()[t]);
    }
    fd_check(params.mu, grads.mu);
    ++fixtures_done;
  }
  return {"gradient-check",
          fixtures_done == 20 && worst < 1e-4,
          fmt("max rel err %.3e over %.0f fixtures", worst,
              static_cast<double>(fixtures_done))};
}

SuiteResult expressivity_cases() {
  const auto checks = gnn::run_expressivity_cases();
  for (const auto& c : checks)
    if (!c.pass) return {"expressivity-cases", false, c.id + ": " + c.detail};
  return {"expressivity-cases", true,
          fmt("%.0f case assertions hold", static_cast<double>(checks.size()))};
}

SuiteResult bfs_vs_floyd(std::uint64_t seed) {
  Rng rng(seed);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 2 + rng.index(49);
    const double p = rng.uniform(0.02, 0.3);
    const graph::Graph g = random_er_graph(n, p, 2, 2, rng);
    const auto fw = oracle::floyd_warshall(g);
    for (int s = 0; s < n; ++s) {
      const auto bfs = graph::bfs_levels(g, s);
      for (int t = 0; t < n; ++t)
        if (bfs[t] != fw[s][t])
          return {"bfs-vs-floyd", false,
                  fmt("distance mismatch at n=%.0f", static_cast<double>(n))};
    }
  }
  return {"bfs-vs-floyd", true, "all distances agree on 25 random graphs"};
}

SuiteResult simd_equivalence(std::uint64_t seed) {
  Rng rng(seed);
  const auto backends = simd::available_backends();
  const auto& ref = simd::scalar_backend();
  double worst = 0.0;
  const std::size_t sizes[] = {0, 1, 3, 7, 8, 9, 31, 257, 1000};
  for (std::size_t n : sizes) {
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const double scale_n = std::max<double>(1.0, static_cast<double>(n));
    for (const auto* b : backends) {
      worst = std::max(worst, std::fabs(b->dot(x.data(), y.data(), n) -
                                        ref.dot(x.data(), y.data(), n)) /
                                  scale_n);
      worst = std::max(worst, std::fabs(b->sum(x.data(), n) - ref.sum(x.data(), n)) /
                                  scale_n);
      auto ya = y, yb = y;
      b->axpy(0.37, x.data(), ya.data(), n);
      ref.axpy(0.37, x.data(), yb.data(), n);
      auto xa = x, xb = x;
      b->scale(xa.data(), -1.93, n);
      ref.scale(xb.data(), -1.93, n);
      auto ra1 = x, ra2 = y, rb1 = x, rb2 = y;
      b->rot(ra1.data(), ra2.data(), 0.8, 0.6, n);
      ref.rot(rb1.data(), rb2.data(), 0.8, 0.6, n);
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::fabs(ya[i] - yb[i]));
        worst = std::max(worst, std::fabs(xa[i] - xb[i]));
        worst = std::max(worst, std::fabs(ra1[i] - rb1[i]));
        worst = std::max(worst, std::fabs(ra2[i] - rb2[i]));
      }
    }
  }
  std::string names;
  for (const auto* b : backends) names += std::string(" ") + b->name;
  return {"simd-equivalence", worst < 1e-12,
          fmt("max dev %.3e, backends:", worst) + names};
}

SuiteResult sampler_determinism(std::uint64_t seed) {
  Rng gen(seed);
  Rng gen_graph = gen.substream("graph-gen");
  const graph::Graph g = graph::generate_sbm({20, 20, 20}, 0.3, 0.05, 4, gen_graph);
  Rng comm_rng1 = gen.substream("communities");
  const auto comms = cluster::fluid_communities(g, 3, comm_rng1);

  Rng cand_rng = gen.substream("candidates");
  const auto cand = graph::build_candidate_set(g, 0, 4, cand_rng);
  if (!cand) return {"sampler-determinism", false, "fixture candidate set empty"};

  const std::vector<int> prev{cand->members[0], cand->members[1]};
  for (int rep = 0; rep < 5; ++rep) {
    Rng r1 = gen.substream("draw", {static_cast<std::uint64_t>(rep)});
    Rng r2 = gen.substream("draw", {static_cast<std::uint64_t>(rep)});
    const auto a = dpp::layer_diverse_sample(g, g.features, *cand, prev, 3, 0.9,
                                             r1, comms);
    const auto b = dpp::layer_diverse_sample(g, g.features, *cand, prev, 3, 0.9,
                                             r2, comms);
    if (a != b) return {"sampler-determinism", false, "same seed, different samples"};

    Rng r3 = gen.substream("draw", {static_cast<std::uint64_t>(rep)});
    Rng r4 = gen.substream("draw", {static_cast<std::uint64_t>(rep)});
    const auto c = dpp::layer_diverse_sample(g, g.features, *cand, {}, 3, 0.9,
                                             r3, comms);
    const auto d = dpp::sample_independent(g, g.features, *cand, prev, 3, 0.9,
                                           r4, comms);
    if (c != d)
      return {"sampler-determinism", false,
              "empty-prev layer-diverse differs from independent"};
  }
  return {"sampler-determinism", true, "5 paired draws identical"};
}

std::vector<SuiteResult> run_all(const Options& opt) {
  const double tol =
      0.01 * std::sqrt(200000.0 / std::max(1, opt.draws));
  std::vector<SuiteResult> out;
  out.push_back(simd_equivalence(opt.seed));
  out.push_back(bfs_vs_floyd(opt.seed + 1));
  out.push_back(eig_reconstruction(opt.seed + 2));
  out.push_back(esp_vs_enumeration(opt.seed + 3));
  out.push_back(cauchy_binet(opt.seed + 4));
  out.push_back(kdpp_exactness(opt.seed + 5, opt.draws, tol));
  out.push_back(det_nonnegativity(opt.seed + 6));
  out.push_back(squeeze_row_scaling(opt.seed + 7));
  out.push_back(squeeze_similar_rows(opt.seed + 8));
  out.push_back(gradient_check(opt.seed + 9));
  out.push_back(expressivity_cases());
  out.push_back(sampler_determinism(opt.seed + 10));
  return out;
}

}  // namespace ldns::verify
