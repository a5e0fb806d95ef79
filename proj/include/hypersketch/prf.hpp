#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "hypersketch/rational.hpp"

namespace hypersketch {

using Seed = std::array<std::uint8_t, 32>;

Seed seed_from_hex(std::string_view hex);
std::string seed_to_hex(const Seed& seed);
// Convenience for tests and tools: hashes a small integer into a seed.
Seed seed_from_u64(std::uint64_t value);

// Domain separation. Every random choice in the library draws from a
// distinct domain, with up to four index words to tell families apart.
enum class Domain : std::uint32_t {
  kStageFilter = 1,
  kConnFilter,
  kFingerprintLevel,
  kFingerprintRate,
  kMembership,
  kConnMembership,
  kTauExponent,
  kTauPoint,
  kSyndromePoint,
  kCheckpoint,
  kUser,
};

struct PrfTag {
  Domain domain = Domain::kUser;
  std::array<std::uint32_t, 4> index{};
};

// Keyed SipHash-2-4 over (tag, input words). The 128-bit key is derived
// from the master seed with BLAKE2b.
class Prf {
 public:
  Prf();
  explicit Prf(const Seed& seed);

  std::uint64_t word(const PrfTag& tag, std::span<const std::uint64_t> input) const;
  std::uint64_t word(const PrfTag& tag, std::uint64_t input) const {
    return word(tag, std::span<const std::uint64_t>(&input, 1));
  }
  // Bernoulli(rate) bit; rate is clamped to [0, 1].
  bool bit(const PrfTag& tag, std::span<const std::uint64_t> input, const Rational& rate) const;

  const Seed& seed() const { return seed_; }
  // BLAKE2b-256 commitment to the seed, safe to publish in file headers.
  std::array<std::uint8_t, 32> commitment() const;

  friend bool operator==(const Prf& a, const Prf& b) { return a.seed_ == b.seed_; }

 private:
  Seed seed_{};
  std::array<std::uint8_t, 16> key_{};
};

// Expands one PRF word into a deterministic stream of words.
class CoinStream {
 public:
  explicit CoinStream(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Number of nested rate-1/2 coins that came up heads, capped.
inline std::size_t geometric_depth(std::uint64_t word, std::size_t cap) {
  auto ones = static_cast<std::size_t>(std::countr_one(word));
  return ones < cap ? ones : cap;
}

}  // namespace hypersketch
