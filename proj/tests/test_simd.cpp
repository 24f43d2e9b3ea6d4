#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldns/matrix.hpp"
#include "ldns/rng.hpp"
#include "ldns/simd.hpp"

using namespace ldns;

TEST_CASE("every available backend matches the scalar reference") {
  Rng rng(11);
  const auto& ref = simd::scalar_backend();
  for (std::size_t n : {0, 1, 3, 7, 8, 9, 15, 64, 257, 1000}) {
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    for (const auto* b : simd::available_backends()) {
      CAPTURE(b->name);
      CAPTURE(n);
      CHECK(b->dot(x.data(), y.data(), n) ==
            doctest::Approx(ref.dot(x.data(), y.data(), n)).epsilon(1e-12));
      CHECK(b->sum(x.data(), n) ==
            doctest::Approx(ref.sum(x.data(), n)).epsilon(1e-12));

      auto ya = y, yb = y;
      b->axpy(1.7, x.data(), ya.data(), n);
      ref.axpy(1.7, x.data(), yb.data(), n);
      auto xa = x, xb = x;
      b->scale(xa.data(), -0.3, n);
      ref.scale(xb.data(), -0.3, n);
      auto p1 = x, p2 = y, q1 = x, q2 = y;
      b->rot(p1.data(), p2.data(), 0.6, 0.8, n);
      ref.rot(q1.data(), q2.data(), 0.6, 0.8, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(ya[i] == doctest::Approx(yb[i]).epsilon(1e-13));
        CHECK(xa[i] == doctest::Approx(xb[i]).epsilon(1e-13));
        CHECK(p1[i] == doctest::Approx(q1[i]).epsilon(1e-13));
        CHECK(p2[i] == doctest::Approx(q2[i]).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("dispatched kernels come from a registered backend") {
  const auto& act = simd::active();
  bool found = false;
  for (const auto* b : simd::available_backends()) found = found || b == &act;
  CHECK(found);
}

TEST_CASE("cosine conventions") {
  const std::vector<double> zero{0, 0, 0};
  const std::vector<double> ex{1, 0, 0};
  const std::vector<double> ey{0, 1, 0};
  CHECK(simd::cosine(zero.data(), ex.data(), 3) == 0.0);
  CHECK(simd::cosine(ex.data(), zero.data(), 3) == 0.0);
  CHECK(simd::cosine(ex.data(), ey.data(), 3) == 0.0);
  CHECK(simd::cosine(ex.data(), ex.data(), 3) == doctest::Approx(1.0));
  const std::vector<double> diag{1, 1, 0};
  CHECK(simd::cosine(ex.data(), diag.data(), 3) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("matmul agrees with a naive triple loop") {
  Rng rng(5);
  Matrix a(7, 4), b(4, 5);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = rng.normal();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) b(i, j) = rng.normal();

  const Matrix c = matmul(a, b);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double want = 0;
      for (std::size_t t = 0; t < 4; ++t) want += a(i, t) * b(t, j);
      CHECK(c(i, j) == doctest::Approx(want).epsilon(1e-12));
    }

  const Matrix at_b = matmul_at_b(a, matmul(a, b));
  const Matrix at = transpose(a);
  const Matrix want2 = matmul(at, matmul(a, b));
  CHECK(max_abs_diff(at_b, want2) < 1e-12);

  const Matrix a_bt = matmul_a_bt(a, transpose(b));
  CHECK(max_abs_diff(a_bt, matmul(a, b)) < 1e-12);
}

TEST_CASE("relu forward and backward masks") {
  Matrix m(2, 3);
  m(0, 0) = -1;
  m(0, 1) = 2;
  m(0, 2) = 0;
  m(1, 0) = 3;
  m(1, 1) = -0.5;
  m(1, 2) = 1e-9;
  Matrix grad(2, 3, 1.0);
  relu_backward_inplace(grad, m);
  relu_inplace(m);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == 2.0);
  CHECK(grad(0, 0) == 0.0);
  CHECK(grad(0, 1) == 1.0);
  CHECK(grad(0, 2) == 0.0);  // gradient vanishes on the boundary
  CHECK(grad(1, 2) == 1.0);
}
