#pragma once

#include <cstddef>
#include <vector>

// Low-level double-precision kernels behind the dense linear algebra.
// A scalar reference backend always exists; on x86-64 an AVX2 variant and on
// aarch64 a NEON variant are compiled in and selected at runtime.  The env
// variable LDNS_SIMD (scalar|avx2|neon) forces a backend when it is available.
//
// Backends may reassociate sums, so results can differ from the scalar
// reference by rounding; equivalence is asserted in tests to ~1e-13 relative.

namespace ldns::simd {

struct Backend {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*scale)(double* x, double a, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // BLAS drot convention: x' = c*x + s*y, y' = c*y - s*x
  void (*rot)(double* x, double* y, double c, double s, std::size_t n);
};

const Backend& scalar_backend();
const Backend* avx2_backend();  // nullptr off x86-64 or when the CPU lacks AVX2
const Backend* neon_backend();  // nullptr off aarch64

// Dispatched backend, chosen once per process.
const Backend& active();

// Every backend usable on this machine (scalar first).
std::vector<const Backend*> available_backends();

inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline void scale(double* x, double a, std::size_t n) { active().scale(x, a, n); }
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline void rot(double* x, double* y, double c, double s, std::size_t n) {
  active().rot(x, y, c, s, n);
}

double nrm2(const double* x, std::size_t n);

// Cosine similarity with the convention cos(u,v) = 0 when either norm is 0.
double cosine(const double* x, const double* y, std::size_t n);

}  // namespace ldns::simd
