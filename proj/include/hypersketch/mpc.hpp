#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hypersketch/config.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/incidence.hpp"
#include "hypersketch/sparsify.hpp"

namespace hypersketch {

struct MpcRoundStats {
  std::size_t round = 0;
  std::size_t messages = 0;
  std::size_t bytes_moved = 0;
  // Largest retained state + max(inbox, outbox) over machines.
  std::size_t peak_bytes = 0;
  std::size_t peak_machine = 0;
};

struct MpcResult {
  EncodedSketch coordinator;
  std::optional<SparsifierOutput> sparsifier;
  std::size_t rounds = 0;
  std::size_t peak_memory = 0;
  // Includes idle padding machines.
  std::size_t machines = 0;
  std::vector<MpcRoundStats> per_round;
};

// max(2, ceil(log_n m)).
std::size_t mpc_round_bound(std::size_t n, std::size_t m);

// One shard per machine. With k >= n shards every vertex gets a group of
// ceil(k/n) machines that combine its fragments by a fan-in-n tree; with
// k < n each machine owns a vertex range. Machine 0 assembles and, when
// `decode` is set, decodes. Throws BudgetExceeded naming the round.
MpcResult mpc_simulate(const std::vector<EdgeMultiset>& shards, const SketchConfig& config,
                       std::size_t memory_budget, bool decode = true);

}  // namespace hypersketch
