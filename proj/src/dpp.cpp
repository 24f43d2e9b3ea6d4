#include "ldns/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "ldns/simd.hpp"

namespace ldns::dpp {

double quality_term(std::span<const double> a_i, std::span<const double> b_i,
                    std::span<const double> a_j) {
  return simd::cosine(a_i.data(), b_i.data(), a_i.size()) *
         simd::cosine(a_i.data(), a_j.data(), a_i.size());
}

double diversity_term(std::span<const double> h_j, std::span<const double> h_jp,
                      std::span<const double> a_j, std::span<const double> a_jp) {
  const std::size_t n = h_j.size();
  return simd::cosine(h_j.data(), a_jp.data(), n) *
         simd::cosine(a_j.data(), h_jp.data(), n) *
         std::exp(simd::cosine(h_j.data(), h_jp.data(), n) - 1.0);
}

Kernel build_kernel(const graph::Graph& g, const Matrix& reps,
                    const graph::CandidateSet& s, const cluster::Communities& c) {
  (void)g;
  if (s.members.empty()) throw std::invalid_argument("build_kernel: empty candidate set");
  const int n_members = static_cast<int>(s.members.size());
  const std::size_t f = reps.cols();

  const Matrix amat = cluster::community_features(reps, c);
  const std::vector<double> b_i = cluster::candidate_features(reps, s);
  const double* a_i = amat.row(c.assignment[s.center]);
  const double cos_ab = simd::cosine(a_i, b_i.data(), f);

  // communities actually present among the members, normalized once
  std::vector<int> comm_ids;
  std::vector<int> comm_local(c.count, -1);
  for (int j : s.members) {
    const int q = c.assignment[j];
    if (comm_local[q] < 0) {
      comm_local[q] = static_cast<int>(comm_ids.size());
      comm_ids.push_back(q);
    }
  }
  const int n_comms = static_cast<int>(comm_ids.size());

  auto normalized = [&](const double* src, double* dst, std::size_t len) {
    const double nrm = simd::nrm2(src, len);
    if (nrm == 0.0) {
      std::fill(dst, dst + len, 0.0);
    } else {
      std::copy(src, src + len, dst);
      simd::scale(dst, 1.0 / nrm, len);
    }
  };

  Matrix hn(n_members, f);
  for (int j = 0; j < n_members; ++j)
    normalized(reps.row(s.members[j]), hn.row(j), f);
  Matrix an(n_comms, f);
  for (int q = 0; q < n_comms; ++q) normalized(amat.row(comm_ids[q]), an.row(q), f);

  // quality per member and cached cosines
  std::vector<double> quality(n_members);
  {
    std::vector<double> ain(f);
    normalized(a_i, ain.data(), f);
    std::vector<double> cos_a_i(n_comms);
    for (int q = 0; q < n_comms; ++q)
      cos_a_i[q] = simd::dot(ain.data(), an.row(q), f);
    for (int j = 0; j < n_members; ++j)
      quality[j] = cos_ab * cos_a_i[comm_local[c.assignment[s.members[j]]]];
  }
  Matrix cos_h_a(n_members, n_comms);  // cos(h_j, a_q)
  for (int j = 0; j < n_members; ++j)
    for (int q = 0; q < n_comms; ++q)
      cos_h_a(j, q) = simd::dot(hn.row(j), an.row(q), f);

  Kernel k;
  k.center = s.center;
  k.members = s.members;
  k.matrix = Matrix(n_members, n_members);
  for (int j = 0; j < n_members; ++j) {
    const int cj = comm_local[c.assignment[s.members[j]]];
    for (int jp = j; jp < n_members; ++jp) {
      const int cjp = comm_local[c.assignment[s.members[jp]]];
      const double cos_hh = simd::dot(hn.row(j), hn.row(jp), f);
      const double div = cos_h_a(j, cjp) * cos_h_a(jp, cj) * std::exp(cos_hh - 1.0);
      const double v = quality[j] * div * quality[jp];
      k.matrix(j, jp) = v;
      k.matrix(jp, j) = v;  // the (j,j') expression is symmetric by inspection
    }
  }
  return k;
}

EigenBasis eig_sym(const Kernel& kernel) {
  const int n = static_cast<int>(kernel.matrix.rows());
  Matrix a = kernel.matrix;
  Matrix vt = Matrix::identity(n);  // rows accumulate eigenvectors (V^T)

  const double norm = frobenius_norm(a);
  const double tol = 1e-10 * norm;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
  };

  if (norm > 0.0) {
    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
      if (off_norm() < tol) {
        converged = true;
        break;
      }
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (apq == 0.0) continue;
          const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
          double t;
          if (std::fabs(theta) > 1e154) {
            t = 0.5 / theta;  // avoid theta^2 overflow
          } else {
            t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
            if (theta < 0.0) t = -t;
          }
          const double cs = 1.0 / std::sqrt(t * t + 1.0);
          const double sn = t * cs;
          // A <- J^T A J, J = [[c, s], [-s, c]] on the (p,q) plane
          simd::rot(a.row(q), a.row(p), cs, sn, n);
          for (int r = 0; r < n; ++r) {
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = cs * arp - sn * arq;
            a(r, q) = sn * arp + cs * arq;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          simd::rot(vt.row(q), vt.row(p), cs, sn, n);
        }
      }
    }
    if (!converged && off_norm() >= tol)
      throw std::runtime_error("eig_sym: Jacobi did not converge in 100 sweeps");
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int x, int y) { return a(x, x) < a(y, y); });

  EigenBasis basis;
  basis.members = kernel.members;
  basis.eigenvalues.resize(n);
  basis.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    basis.eigenvalues[j] = a(perm[j], perm[j]);
    for (int r = 0; r < n; ++r) basis.vectors(r, j) = vt(perm[j], r);
  }
  const double lmax = n > 0 ? std::max(basis.eigenvalues.back(), 0.0) : 0.0;
  for (double& l : basis.eigenvalues)
    if (l < 1e-12 * lmax || l < 0.0) l = 0.0;
  return basis;
}

ESPTable esp(const std::vector<double>& eigenvalues, int k) {
  const int n = static_cast<int>(eigenvalues.size());
  if (k < 0 || k > n) throw std::invalid_argument("esp: k outside [0, S]");
  ESPTable t;
  t.k = k;
  t.size = n;
  t.e = Matrix(k + 1, n + 1);
  for (int v = 0; v <= n; ++v) t.e(0, v) = 1.0;
  for (int l = 1; l <= k; ++l) {
    t.e(l, 0) = 0.0;
    for (int v = 1; v <= n; ++v)
      t.e(l, v) = t.e(l, v - 1) + eigenvalues[v - 1] * t.e(l - 1, v - 1);
  }
  return t;
}

std::vector<int> sample_kdpp(const EigenBasis& basis, int k, Rng& rng) {
  const int n = static_cast<int>(basis.eigenvalues.size());
  if (k < 1 || k > n) throw std::invalid_argument("sample_kdpp: k outside [1, S]");
  if (k > basis.positive_count())
    throw std::runtime_error("sample_kdpp: rank deficient (k exceeds positive eigenvalues)");

  // phase 1: pick k eigenvector indices, scanning v = S..1
  const ESPTable table = esp(basis.eigenvalues, k);
  std::vector<int> chosen;
  {
    int l = k;
    for (int v = n; v >= 1 && l > 0; --v) {
      const double denom = table.at(l, v);
      const double p =
          denom > 0.0 ? basis.eigenvalues[v - 1] * table.at(l - 1, v - 1) / denom
                      : 0.0;
      if (rng.uniform() < p) {
        chosen.push_back(v - 1);
        --l;
      }
    }
    if (l != 0)
      throw std::runtime_error("sample_kdpp: eigenvector selection failed");
  }

  // phase 2: walk the selected (possibly squeezed) vectors
  std::vector<std::vector<double>> vecs;
  vecs.reserve(chosen.size());
  for (int j : chosen) {
    std::vector<double> col(n);
    for (int r = 0; r < n; ++r) col[r] = basis.vectors(r, j);
    vecs.push_back(std::move(col));
  }

  std::vector<int> picked;
  std::vector<double> weight(n);
  while (static_cast<int>(picked.size()) < k) {
    std::fill(weight.begin(), weight.end(), 0.0);
    for (const auto& v : vecs)
      for (int i = 0; i < n; ++i) weight[i] += v[i] * v[i];
    const double total = simd::sum(weight.data(), n);
    if (!(total > 1e-300))
      throw std::runtime_error("sample_kdpp: all phase-2 probabilities are zero");

    const double target = rng.uniform() * total;
    int item = -1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (weight[i] <= 0.0) continue;
      acc += weight[i];
      item = i;
      if (acc > target) break;
    }
    picked.push_back(item);

    // eliminate coordinate `item`: subtract multiples of the vector with the
    // largest |coordinate|, then re-orthonormalize what is left
    std::size_t pivot = 0;
    for (std::size_t t = 1; t < vecs.size(); ++t)
      if (std::fabs(vecs[t][item]) > std::fabs(vecs[pivot][item])) pivot = t;
    const double piv = vecs[pivot][item];
    if (piv == 0.0)
      throw std::runtime_error("sample_kdpp: degenerate pivot in phase 2");

    std::vector<std::vector<double>> next;
    next.reserve(vecs.size() - 1);
    for (std::size_t t = 0; t < vecs.size(); ++t) {
      if (t == pivot) continue;
      auto& v = vecs[t];
      simd::axpy(-v[item] / piv, vecs[pivot].data(), v.data(), n);
      // modified Gram-Schmidt against the basis accepted so far
      for (const auto& b : next) simd::axpy(-simd::dot(v.data(), b.data(), n),
                                            b.data(), v.data(), n);
      const double nrm = simd::nrm2(v.data(), n);
      if (nrm >= 1e-10) {
        simd::scale(v.data(), 1.0 / nrm, n);
        next.push_back(std::move(v));
      }
    }
    vecs = std::move(next);
    // orthonormalization only remembers the spanned subspace, so the squeeze
    // profile has to be re-imposed for the remaining selections
    if (!basis.row_damping.empty()) {
      for (auto& v : vecs)
        for (int r = 0; r < n; ++r) v[r] *= basis.row_damping[r];
    }
  }

  std::vector<int> out;
  out.reserve(picked.size());
  for (int idx : picked) out.push_back(basis.members[idx]);
  std::sort(out.begin(), out.end());
  return out;
}

EigenBasis squeeze(const EigenBasis& basis, int jstar_row, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("squeeze: gamma outside [0, 1]");
  const int n = static_cast<int>(basis.vectors.rows());
  if (jstar_row < 0 || jstar_row >= n)
    throw std::invalid_argument("squeeze: row index out of range");

  EigenBasis out = basis;
  const double* row = basis.vectors.row(jstar_row);
  if (simd::nrm2(row, n) <= 1e-12) return out;  // degenerate row: no-op

  int m = 0;
  for (int y = 1; y < n; ++y)
    if (std::fabs(row[y]) > std::fabs(row[m])) m = y;
  const double pivot = row[m];

  std::vector<double> direction(n);
  for (int y = 0; y < n; ++y) direction[y] = row[y] / pivot;

  if (out.row_damping.empty()) out.row_damping.assign(n, 1.0);
  for (int r = 0; r < n; ++r) {
    const double before = simd::nrm2(basis.vectors.row(r), n);
    const double coef = -gamma * basis.vectors(r, m);
    simd::axpy(coef, direction.data(), out.vectors.row(r), n);
    const double after = simd::nrm2(out.vectors.row(r), n);
    if (before > 0.0) out.row_damping[r] *= after / before;
  }
  out.squeezed = true;
  return out;
}

namespace {

std::vector<int> sample_impl(const graph::Graph& g, const Matrix& reps,
                             const graph::CandidateSet& s,
                             const std::vector<int>& prev, int k, double gamma,
                             Rng& rng, const cluster::Communities& c,
                             bool layer_diverse, SampleDiag* diag) {
  if (k < 1) throw std::invalid_argument("negative sampling: k must be >= 1");
  if (diag) {
    diag->node = s.center;
    diag->members = s.members;
    diag->eigenvalues.clear();
    diag->sampled.clear();
    diag->squeezed_rows.clear();
  }
  if (static_cast<int>(s.members.size()) < k) {
    if (diag) diag->sampled = s.members;
    return s.members;  // too few candidates: take them all
  }

  const Kernel kernel = build_kernel(g, reps, s, c);
  EigenBasis basis = eig_sym(kernel);
  if (diag) diag->eigenvalues = basis.eigenvalues;

  int k_eff = k;
  const int npos = basis.positive_count();
  if (k_eff > npos) {
    static bool warned = false;
    if (!warned) {
      std::fprintf(stderr,
                   "ldns: rank-deficient kernel, reducing sample size %d -> %d "
                   "(reported once)\n",
                   k_eff, npos);
      warned = true;
    }
    k_eff = npos;
  }
  if (k_eff == 0) return {};

  if (layer_diverse) {
    for (int jstar : prev) {
      const auto it = std::lower_bound(basis.members.begin(), basis.members.end(), jstar);
      if (it == basis.members.end() || *it != jstar) continue;
      const int row = static_cast<int>(it - basis.members.begin());
      basis = squeeze(basis, row, gamma);
      if (diag) diag->squeezed_rows.push_back(row);
    }
  }

  auto sample = sample_kdpp(basis, k_eff, rng);
  if (diag) diag->sampled = sample;
  return sample;
}

}  // namespace

std::vector<int> layer_diverse_sample(const graph::Graph& g, const Matrix& reps,
                                      const graph::CandidateSet& s,
                                      const std::vector<int>& prev, int k,
                                      double gamma, Rng& rng,
                                      const cluster::Communities& c,
                                      SampleDiag* diag) {
  return sample_impl(g, reps, s, prev, k, gamma, rng, c, true, diag);
}

std::vector<int> sample_independent(const graph::Graph& g, const Matrix& reps,
                                    const graph::CandidateSet& s,
                                    const std::vector<int>& prev, int k,
                                    double gamma, Rng& rng,
                                    const cluster::Communities& c,
                                    SampleDiag* diag) {
  return sample_impl(g, reps, s, prev, k, gamma, rng, c, false, diag);
}

}  // namespace ldns::dpp
