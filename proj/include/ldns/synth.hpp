#pragma once

#include <vector>

#include "ldns/graph.hpp"
#include "ldns/rng.hpp"

namespace ldns::graph {

// Stochastic block model fixture. Labels are block ids; features are a
// one-hot block indicator plus N(0, 0.1) noise. Regenerates up to max_tries
// times looking for a connected draw, then keeps the largest component.
Graph generate_sbm(const std::vector<int>& block_sizes, double p_in, double p_out,
                   int feature_dim, Rng& rng, int max_tries = 20);

// Carves a single-bridge bottleneck out of a connected graph: partitions it
// into q fluid communities, then deletes nodes incident to inter-community
// edges until exactly one such edge remains, and returns the largest
// connected remainder (node ids re-indexed, masks remapped).
Graph build_bottleneck_graph(const Graph& g, int q, Rng& rng);

// Stratified-by-label random split assignment; fractions need not sum to 1.
void assign_splits(Graph& g, double train_frac, double val_frac, double test_frac,
                   Rng& rng);

}  // namespace ldns::graph
