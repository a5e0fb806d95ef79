#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "hypersketch/prf.hpp"

namespace hypersketch {

struct SparseRecoveryResult {
  bool dense = false;
  std::map<std::uint64_t, std::int64_t> entries;
};

// Exact recovery of s-sparse vectors over ids [0, universe).
//
// Keeps the power sums S_k = sum_i x_i a_i^k for k = 0..2s (a Reed-Solomon
// parity check, a_i a seeded point per id) plus one evaluation of a second
// code, sum_i x_i b^i, that catches vectors which are not s-sparse but alias
// to an s-sparse syndrome.
class SparseRecoverySketch {
 public:
  SparseRecoverySketch(std::size_t s, std::uint64_t universe, const Prf& prf, std::uint32_t instance = 0,
                       std::size_t s_cap = 8, std::int64_t value_bound = std::int64_t{1} << 40);

  void update(std::uint64_t id, std::int64_t delta);
  SparseRecoveryResult recover() const;

  SparseRecoverySketch& operator+=(const SparseRecoverySketch& other);
  std::vector<std::uint8_t> serialize() const;

  std::size_t sparsity() const { return s_; }
  std::uint64_t universe() const { return universe_; }

 private:
  std::uint64_t point(std::uint64_t id) const;

  std::size_t s_;
  std::uint64_t universe_;
  Prf prf_;
  std::uint32_t instance_;
  std::int64_t value_bound_;
  std::uint64_t check_point_;
  std::vector<std::uint64_t> syndrome_;
  std::uint64_t checkpoint_ = 0;
};

}  // namespace hypersketch
