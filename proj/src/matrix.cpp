#include "ldns/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "ldns/simd.hpp"

namespace ldns {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t t = 0; t < a.cols(); ++t) {
      if (ai[t] != 0.0) simd::axpy(ai[t], b.row(t), ci, b.cols());
    }
  }
  return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmul_at_b: shape mismatch");
  Matrix c(a.cols(), b.cols());
  for (std::size_t t = 0; t < a.rows(); ++t) {
    const double* at = a.row(t);
    const double* bt = b.row(t);
    for (std::size_t f = 0; f < a.cols(); ++f) {
      if (at[f] != 0.0) simd::axpy(at[f], bt, c.row(f), b.cols());
    }
  }
  return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_a_bt: shape mismatch");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c(i, j) = simd::dot(a.row(i), b.row(j), a.cols());
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void relu_inplace(Matrix& m) {
  double* p = m.data();
  const std::size_t n = m.rows() * m.cols();
  for (std::size_t i = 0; i < n; ++i)
    if (p[i] < 0.0) p[i] = 0.0;
}

void relu_backward_inplace(Matrix& grad, const Matrix& pre) {
  double* g = grad.data();
  const double* z = pre.data();
  const std::size_t n = grad.rows() * grad.cols();
  for (std::size_t i = 0; i < n; ++i)
    if (z[i] <= 0.0) g[i] = 0.0;
}

double frobenius_norm(const Matrix& m) {
  return simd::nrm2(m.data(), m.rows() * m.cols());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double d = 0.0;
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i)
    d = std::max(d, std::fabs(a.data()[i] - b.data()[i]));
  return d;
}

}  // namespace ldns
