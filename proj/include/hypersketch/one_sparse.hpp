#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hypersketch/bytes.hpp"
#include "hypersketch/edge_id.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/prf.hpp"

namespace hypersketch {

// A tester is stored as a flat run of 64-bit words:
//   [0]      phi   (signed count, two's complement)
//   [1]      tau   (field element)
//   [2, 2+W) alpha (signed id sum, two's complement, little-endian limbs)
inline constexpr std::size_t kTesterHeaderWords = 2;

inline std::size_t tester_words(std::size_t alpha_limbs) { return kTesterHeaderWords + alpha_limbs; }

// Alpha limbs needed for ids below 2^id_bits with 48 bits of headroom for
// weights and coefficients.
inline std::size_t alpha_limbs_for(std::size_t id_bits) { return (id_bits + 48 + 63) / 64; }

// Exponent of z attached to an id in tau; a seeded 32-bit hash.
std::uint32_t tau_exponent(const Prf& prf, const EdgeId& id);
std::uint64_t tau_point(const Prf& prf, std::uint32_t instance);

// t += scale * e_id, where z_pow = z^tau_exponent(id).
void tester_add(std::uint64_t* t, std::size_t alpha_limbs, std::span<const std::uint64_t> id,
                std::int64_t scale, std::uint64_t z_pow);
void tester_accumulate(std::uint64_t* dst, const std::uint64_t* src, std::size_t alpha_limbs);
void tester_subtract(std::uint64_t* dst, const std::uint64_t* src, std::size_t alpha_limbs);
bool tester_is_zero(const std::uint64_t* t, std::size_t alpha_limbs);

enum class DecodeKind { kEmpty, kOneSparse, kDense };

struct TesterDecode {
  DecodeKind kind = DecodeKind::kEmpty;
  EdgeId id;
  std::int64_t weight = 0;
};

TesterDecode tester_decode(const std::uint64_t* t, std::size_t alpha_limbs, std::uint64_t z,
                           const Prf& prf);

void write_tester(ByteWriter& out, const std::uint64_t* t, std::size_t alpha_limbs);
void read_tester(ByteReader& in, std::uint64_t* t, std::size_t alpha_limbs);

// Standalone (alpha, phi, tau) accumulator over one evaluation point z.
class OneSparseTester {
 public:
  OneSparseTester(const Prf& prf, std::uint32_t instance, std::size_t alpha_limbs);

  void update(const EdgeId& id, std::int64_t delta);
  void update(const Hyperedge& e, std::size_t n, std::int64_t delta) { update(canonical_id(e, n), delta); }
  TesterDecode decode() const;
  bool is_zero() const { return tester_is_zero(words_.data(), alpha_limbs_); }

  std::int64_t phi() const { return static_cast<std::int64_t>(words_[0]); }
  std::uint64_t tau() const { return words_[1]; }
  // Alpha as signed two's-complement limbs.
  std::span<const std::uint64_t> alpha() const { return {words_.data() + 2, alpha_limbs_}; }
  std::uint64_t z() const { return z_; }

  OneSparseTester& operator+=(const OneSparseTester& other);
  std::vector<std::uint8_t> serialize() const;

 private:
  Prf prf_;
  std::uint32_t instance_;
  std::size_t alpha_limbs_;
  std::uint64_t z_;
  std::vector<std::uint64_t> words_;
};

}  // namespace hypersketch
