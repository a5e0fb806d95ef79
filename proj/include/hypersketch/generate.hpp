#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "hypersketch/hypergraph.hpp"
#include "hypersketch/stream.hpp"

namespace hypersketch {

// Uniform edge with arity in [2, r_max].
Hyperedge random_edge(std::mt19937_64& rng, std::size_t n, std::size_t r_max);

// `draws` random edges, each with multiplicity in [1, max_mult].
EdgeMultiset random_multiset(std::mt19937_64& rng, std::size_t n, std::size_t r_max, std::size_t draws,
                             Weight max_mult = 1);

// Inserts every unit of `target` plus `churn` insert/delete pairs of extra
// edges, in random order, never deleting an absent edge.
std::vector<StreamUpdate> random_stream(std::mt19937_64& rng, const EdgeMultiset& target, std::size_t n,
                                        std::size_t r_max, std::size_t churn);

// Splits every unit of weight onto a uniformly random shard.
std::vector<EdgeMultiset> random_shards(std::mt19937_64& rng, const EdgeMultiset& edges, std::size_t k);

}  // namespace hypersketch
