#include "hypersketch/prf.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "hypersketch/errors.hpp"

namespace hypersketch {

namespace {

void ensure_sodium() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialize");
  });
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void put_u32(unsigned char* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

void put_u64(unsigned char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

}  // namespace

Seed seed_from_hex(std::string_view hex) {
  if (hex.starts_with("0x")) hex.remove_prefix(2);
  if (hex.size() != 64) throw InputError("seed must be 64 hex digits");
  Seed seed{};
  for (std::size_t i = 0; i < 32; ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw InputError("seed is not valid hex");
    seed[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return seed;
}

std::string seed_to_hex(const Seed& seed) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : seed) {
    out += kDigits[b >> 4];
    out += kDigits[b & 15];
  }
  return out;
}

Seed seed_from_u64(std::uint64_t value) {
  ensure_sodium();
  unsigned char msg[8];
  put_u64(msg, value);
  Seed seed{};
  crypto_generichash(seed.data(), seed.size(), msg, sizeof msg, nullptr, 0);
  return seed;
}

Prf::Prf() : Prf(Seed{}) {}

Prf::Prf(const Seed& seed) : seed_(seed) {
  ensure_sodium();
  static_assert(crypto_shorthash_KEYBYTES == 16);
  static constexpr char kLabel[] = "hypersketch/siphash-key";
  crypto_generichash(key_.data(), key_.size(), reinterpret_cast<const unsigned char*>(kLabel),
                     sizeof kLabel - 1, seed_.data(), seed_.size());
}

std::uint64_t Prf::word(const PrfTag& tag, std::span<const std::uint64_t> input) const {
  constexpr std::size_t kHeader = 20;
  constexpr std::size_t kInline = 16;
  unsigned char stack[kHeader + 8 * kInline];
  std::vector<unsigned char> heap;
  unsigned char* buf = stack;
  std::size_t len = kHeader + 8 * input.size();
  if (input.size() > kInline) {
    heap.resize(len);
    buf = heap.data();
  }
  put_u32(buf, static_cast<std::uint32_t>(tag.domain));
  for (std::size_t i = 0; i < 4; ++i) put_u32(buf + 4 + 4 * i, tag.index[i]);
  for (std::size_t i = 0; i < input.size(); ++i) put_u64(buf + kHeader + 8 * i, input[i]);
  unsigned char out[crypto_shorthash_BYTES];
  crypto_shorthash(out, buf, len, key_.data());
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | out[i];
  return v;
}

bool Prf::bit(const PrfTag& tag, std::span<const std::uint64_t> input, const Rational& rate) const {
  if (rate <= Rational(0)) return false;
  if (rate >= Rational(1)) return true;
  auto threshold = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rate.numerator()) << 64) /
      static_cast<unsigned __int128>(rate.denominator()));
  return word(tag, input) < threshold;
}

std::array<std::uint8_t, 32> Prf::commitment() const {
  static constexpr char kLabel[] = "hypersketch/seed-commitment";
  std::array<std::uint8_t, 32> out{};
  crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(kLabel),
                     sizeof kLabel - 1, seed_.data(), seed_.size());
  return out;
}

}  // namespace hypersketch
