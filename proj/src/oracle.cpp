#include "ldns/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace ldns::oracle {

std::vector<std::vector<int>> floyd_warshall(const graph::Graph& g) {
  const int n = g.num_nodes;
  const int inf = 1 << 29;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (int j : g.adj[i]) d[i][j] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (auto& row : d)
    for (int& x : row)
      if (x >= inf) x = -1;
  return d;
}

double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: not square");
  const int n = static_cast<int>(a.rows());
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a(r, c)) > std::fabs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

Matrix principal_minor(const Matrix& l, const std::vector<int>& idx) {
  Matrix m(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = l(idx[i], idx[j]);
  return m;
}

void for_each_subset(int n, int k,
                     const std::function<void(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::map<std::vector<int>, double> kdpp_exact_probs(const Matrix& l, int k) {
  std::map<std::vector<int>, double> dets;
  double total = 0.0;
  for_each_subset(static_cast<int>(l.rows()), k, [&](const std::vector<int>& idx) {
    const double d = determinant(principal_minor(l, idx));
    dets[idx] = d;
    total += d;
  });
  if (total <= 0.0)
    throw std::domain_error("kdpp_exact_probs: non-positive normalizer");
  for (auto& [_, v] : dets) v /= total;
  return dets;
}

double esp_bruteforce(const std::vector<double>& lambdas, int k) {
  double total = 0.0;
  for_each_subset(static_cast<int>(lambdas.size()), k,
                  [&](const std::vector<int>& idx) {
                    double prod = 1.0;
                    for (int i : idx) prod *= lambdas[i];
                    total += prod;
                  });
  return total;
}

double sum_principal_minors(const Matrix& l, int k) {
  double total = 0.0;
  for_each_subset(static_cast<int>(l.rows()), k, [&](const std::vector<int>& idx) {
    total += determinant(principal_minor(l, idx));
  });
  return total;
}

}  // namespace ldns::oracle
