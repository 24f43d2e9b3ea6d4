#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ldns::verify {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Exact k-DPP law vs brute-force subset enumeration over >= 20 random PSD
// kernels, S in {4..7}, k in {1..3}.
SuiteResult kdpp_exactness(std::uint64_t seed, int draws, double tol);

// Row-norm scaling of the squeeze: ||V'[j*,:]|| = (1-gamma) ||V[j*,:]||.
SuiteResult squeeze_row_scaling(std::uint64_t seed);

// Duplicated rows scale identically; delta-similar rows obey the sandwich
// bounds at delta in {0.01, 0.05}.
SuiteResult squeeze_similar_rows(std::uint64_t seed);

SuiteResult esp_vs_enumeration(std::uint64_t seed);

// sum over |Y| = k of det(L_Y) equals e_k(lambda), S <= 10, k <= 4.
SuiteResult cauchy_binet(std::uint64_t seed);

// det(L_Y) >= -1e-9 for subsets actually drawn by the sampler.
SuiteResult det_nonnegativity(std::uint64_t seed);

// V diag(lambda) V^T reconstructs PSD kernels; V^T V = I.
SuiteResult eig_reconstruction(std::uint64_t seed);

// Analytic gradients vs central finite differences on 20 random 10-node
// fixtures, with and without negative samples.
SuiteResult gradient_check(std::uint64_t seed);

SuiteResult expressivity_cases();

SuiteResult bfs_vs_floyd(std::uint64_t seed);

// Scalar reference vs every SIMD backend available on this machine.
SuiteResult simd_equivalence(std::uint64_t seed);

// Identical seeds give identical samples; with no previous layer the
// layer-diverse and independent samplers coincide draw for draw.
SuiteResult sampler_determinism(std::uint64_t seed);

struct Options {
  std::uint64_t seed = 20240401;
  int draws = 200000;  // k-DPP draw count; lower widens the tolerance
};

std::vector<SuiteResult> run_all(const Options& opt);

}  // namespace ldns::verify
