#include "ldns/simd.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace ldns::simd {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  // four accumulators keep the FP dependency chain short
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum_scalar(const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i];
    s1 += x[i + 1];
    s2 += x[i + 2];
    s3 += x[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += x[i];
  return s;
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

const Backend kScalar = {"scalar", dot_scalar, axpy_scalar, scale_scalar,
                         sum_scalar, rot_scalar};

const Backend* pick_active() {
  const Backend* chosen = nullptr;
  if (const char* req = std::getenv("LDNS_SIMD")) {
    if (std::strcmp(req, "scalar") == 0) return &kScalar;
    if (std::strcmp(req, "avx2") == 0) chosen = avx2_backend();
    if (std::strcmp(req, "neon") == 0) chosen = neon_backend();
    if (chosen == nullptr) {
      std::fprintf(stderr, "ldns: LDNS_SIMD=%s unavailable, using scalar\n", req);
      return &kScalar;
    }
    return chosen;
  }
  if ((chosen = avx2_backend()) != nullptr) return chosen;
  if ((chosen = neon_backend()) != nullptr) return chosen;
  return &kScalar;
}

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const Backend& active() {
  static const Backend* b = pick_active();
  return *b;
}

std::vector<const Backend*> available_backends() {
  std::vector<const Backend*> out{&kScalar};
  if (const Backend* b = avx2_backend()) out.push_back(b);
  if (const Backend* b = neon_backend()) out.push_back(b);
  return out;
}

double nrm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

double cosine(const double* x, const double* y, std::size_t n) {
  const double nx = nrm2(x, n);
  const double ny = nrm2(y, n);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return dot(x, y, n) / (nx * ny);
}

}  // namespace ldns::simd
