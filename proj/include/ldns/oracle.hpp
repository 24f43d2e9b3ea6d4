#pragma once

#include <functional>
#include <map>
#include <vector>

#include "ldns/graph.hpp"
#include "ldns/matrix.hpp"

// Brute-force reference routes, deliberately independent of the main
// implementation paths: Floyd-Warshall instead of BFS, LU determinants
// instead of the Jacobi eigensolver, explicit subset enumeration instead of
// the symmetric-polynomial recurrence.  Used by the verify command and the
// test suites; never by the samplers themselves.
namespace ldns::oracle {

// all-pairs hop distances, -1 for unreachable (intended for N <= ~50)
std::vector<std::vector<int>> floyd_warshall(const graph::Graph& g);

// determinant by LU with partial pivoting
double determinant(Matrix a);

Matrix principal_minor(const Matrix& l, const std::vector<int>& idx);

// visits every k-subset of {0..n-1} in lexicographic order
void for_each_subset(int n, int k,
                     const std::function<void(const std::vector<int>&)>& fn);

// exact k-DPP law: subset -> det(L_Y) / sum over k-subsets of det
std::map<std::vector<int>, double> kdpp_exact_probs(const Matrix& l, int k);

// elementary symmetric polynomial by explicit subset enumeration
double esp_bruteforce(const std::vector<double>& lambdas, int k);

// sum of det(L_Y) over all k-subsets
double sum_principal_minors(const Matrix& l, int k);

}  // namespace ldns::oracle
