#pragma once

#include <cstdint>

// Arithmetic modulo the Mersenne prime 2^61 - 1.
namespace hypersketch::field {

inline constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t reduce(unsigned __int128 x) {
  std::uint64_t r = static_cast<std::uint64_t>(x & kP) + static_cast<std::uint64_t>(x >> 61);
  r = (r & kP) + (r >> 61);
  return r >= kP ? r - kP : r;
}

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kP ? s - kP : s;
}

inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kP - b; }

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return reduce(static_cast<unsigned __int128>(a) * b);
}

inline std::uint64_t from_i64(std::int64_t v) {
  if (v >= 0) return static_cast<std::uint64_t>(v) % kP;
  std::uint64_t m = (~static_cast<std::uint64_t>(v) + 1) % kP;
  return m == 0 ? 0 : kP - m;
}

inline std::uint64_t pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  base %= kP;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

inline std::uint64_t inverse(std::uint64_t a) { return pow(a, kP - 2); }

// Maps an arbitrary word to a nonzero field element.
inline std::uint64_t nonzero_element(std::uint64_t word) { return 1 + word % (kP - 1); }

}  // namespace hypersketch::field
