#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hypersketch/edge_id.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/one_sparse.hpp"
#include "hypersketch/prf.hpp"

namespace hypersketch {

// floor(log2(support_bound)) + 1 subsampling levels.
std::size_t l0_levels(std::uint64_t support_bound);
// ceil(c * ln(1/delta)) independent repetitions, at least one.
std::size_t l0_reps(double delta, double c);

struct L0Shape {
  std::size_t levels = 1;
  std::size_t reps = 1;
  std::size_t alpha_limbs = 1;

  std::size_t testers() const { return levels * reps; }
  std::size_t words() const { return testers() * tester_words(alpha_limbs); }
  friend bool operator==(const L0Shape&, const L0Shape&) = default;
};

// Deepest level of each repetition that admits `id`, written to out[0..reps).
void membership_depths(const Prf& prf, const PrfTag& membership, std::span<const std::uint64_t> id,
                       std::size_t reps, std::size_t levels, std::size_t* out);

struct Sample {
  EdgeId id;
  std::int64_t weight = 0;
};

// Decodes that fail this predicate are treated as Dense.
using IdFilter = std::function<bool(const EdgeId&)>;

// Geometric-subsampling sampler. Tester (rep q, level j) sees exactly the
// ids whose membership depth in rep q is >= j. Rep q uses evaluation point
// tau_point(prf, q), so samplers built from the same Prf can be summed.
class L0Sampler {
 public:
  L0Sampler(L0Shape shape, Prf prf, PrfTag membership);
  L0Sampler(L0Shape shape, Prf prf, PrfTag membership, std::vector<std::uint64_t> words);

  void update(const EdgeId& id, std::int64_t delta);
  void update(const Hyperedge& e, std::size_t n, std::int64_t delta) { update(canonical_id(e, n), delta); }

  // First OneSparse decode in scan order (reps ascending, levels descending).
  std::optional<Sample> sample(const IdFilter& accept = {}) const;
  // Every distinct id that decodes as OneSparse at some (rep, level).
  std::vector<Sample> harvest(const IdFilter& accept = {}) const;
  bool is_zero() const;

  L0Sampler& operator+=(const L0Sampler& other);
  L0Sampler& operator-=(const L0Sampler& other);

  const L0Shape& shape() const { return shape_; }
  std::span<const std::uint64_t> words() const { return words_; }
  std::vector<std::uint8_t> serialize() const;

 private:
  void check_compatible(const L0Sampler& other) const;
  std::optional<Sample> decode_at(std::size_t rep, std::size_t level, const IdFilter& accept) const;

  L0Shape shape_;
  Prf prf_;
  PrfTag membership_;
  std::vector<std::uint64_t> z_;
  std::vector<std::uint64_t> words_;
};

}  // namespace hypersketch
