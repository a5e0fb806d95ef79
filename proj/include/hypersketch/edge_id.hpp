#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hypersketch {

// Unbounded nonnegative integer, little-endian 64-bit limbs with no
// trailing zero limbs. Zero has no limbs.
class EdgeId {
 public:
  EdgeId() = default;
  explicit EdgeId(std::uint64_t value);
  static EdgeId from_limbs(std::vector<std::uint64_t> limbs);

  std::span<const std::uint64_t> limbs() const { return limbs_; }
  bool is_zero() const { return limbs_.empty(); }
  bool test(std::size_t bit) const;
  void set(std::size_t bit);
  std::size_t popcount() const;
  // Index of the highest set bit plus one; 0 for zero.
  std::size_t bit_width() const;
  std::optional<std::uint64_t> to_u64() const;
  std::string to_decimal() const;

  friend bool operator==(const EdgeId&, const EdgeId&) = default;
  friend std::strong_ordering operator<=>(const EdgeId& a, const EdgeId& b);

 private:
  void normalize();
  std::vector<std::uint64_t> limbs_;
};

}  // namespace hypersketch
