#include "hypersketch/one_sparse.hpp"

#include <algorithm>

#include "hypersketch/errors.hpp"
#include "hypersketch/field.hpp"

namespace hypersketch {

namespace {

// dst += sign * (mag * id) over `limbs` two's-complement words.
void add_scaled(std::uint64_t* dst, std::size_t limbs, std::span<const std::uint64_t> id,
                std::uint64_t mag, bool negative) {
  if (negative) {
    // Subtract via borrow propagation.
    unsigned __int128 carry = 0;
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < limbs; ++i) {
      unsigned __int128 prod = carry;
      if (i < id.size()) prod += static_cast<unsigned __int128>(id[i]) * mag;
      auto low = static_cast<std::uint64_t>(prod);
      carry = prod >> 64;
      std::uint64_t before = dst[i];
      std::uint64_t after = before - low - borrow;
      borrow = (before < low || (before - low) < borrow) ? 1 : 0;
      dst[i] = after;
    }
    return;
  }
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs; ++i) {
    unsigned __int128 sum = carry + dst[i];
    if (i < id.size()) sum += static_cast<unsigned __int128>(id[i]) * mag;
    dst[i] = static_cast<std::uint64_t>(sum);
    carry = sum >> 64;
  }
}

}  // namespace

std::uint32_t tau_exponent(const Prf& prf, const EdgeId& id) {
  return static_cast<std::uint32_t>(prf.word(PrfTag{Domain::kTauExponent, {}}, id.limbs()));
}

std::uint64_t tau_point(const Prf& prf, std::uint32_t instance) {
  return field::nonzero_element(prf.word(PrfTag{Domain::kTauPoint, {instance, 0, 0, 0}}, 0));
}

void tester_add(std::uint64_t* t, std::size_t alpha_limbs, std::span<const std::uint64_t> id,
                std::int64_t scale, std::uint64_t z_pow) {
  t[0] += static_cast<std::uint64_t>(scale);
  t[1] = field::add(t[1], field::mul(field::from_i64(scale), z_pow));
  bool negative = scale < 0;
  std::uint64_t mag = negative ? ~static_cast<std::uint64_t>(scale) + 1 : static_cast<std::uint64_t>(scale);
  add_scaled(t + kTesterHeaderWords, alpha_limbs, id, mag, negative);
}

void tester_accumulate(std::uint64_t* dst, const std::uint64_t* src, std::size_t alpha_limbs) {
  dst[0] += src[0];
  dst[1] = field::add(dst[1], src[1]);
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < alpha_limbs; ++i) {
    unsigned __int128 sum = carry + dst[2 + i] + src[2 + i];
    dst[2 + i] = static_cast<std::uint64_t>(sum);
    carry = sum >> 64;
  }
}

void tester_subtract(std::uint64_t* dst, const std::uint64_t* src, std::size_t alpha_limbs) {
  dst[0] -= src[0];
  dst[1] = field::sub(dst[1], src[1]);
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < alpha_limbs; ++i) {
    std::uint64_t a = dst[2 + i];
    std::uint64_t b = src[2 + i];
    std::uint64_t r = a - b - borrow;
    borrow = (a < b || (a - b) < borrow) ? 1 : 0;
    dst[2 + i] = r;
  }
}

bool tester_is_zero(const std::uint64_t* t, std::size_t alpha_limbs) {
  for (std::size_t i = 0; i < tester_words(alpha_limbs); ++i) {
    if (t[i] != 0) return false;
  }
  return true;
}

TesterDecode tester_decode(const std::uint64_t* t, std::size_t alpha_limbs, std::uint64_t z,
                           const Prf& prf) {
  TesterDecode out;
  if (tester_is_zero(t, alpha_limbs)) return out;
  out.kind = DecodeKind::kDense;
  auto phi = static_cast<std::int64_t>(t[0]);
  if (phi == 0) return out;

  // |alpha| and its sign.
  std::vector<std::uint64_t> mag(t + 2, t + 2 + alpha_limbs);
  bool alpha_negative = alpha_limbs > 0 && (mag.back() >> 63) != 0;
  if (alpha_negative) {
    std::uint64_t carry = 1;
    for (auto& limb : mag) {
      limb = ~limb + carry;
      carry = (carry != 0 && limb == 0) ? 1 : 0;
    }
  }
  bool alpha_zero = std::all_of(mag.begin(), mag.end(), [](std::uint64_t l) { return l == 0; });
  if (!alpha_zero && alpha_negative != (phi < 0)) return out;

  std::uint64_t divisor = phi < 0 ? ~static_cast<std::uint64_t>(phi) + 1 : static_cast<std::uint64_t>(phi);
  unsigned __int128 rem = 0;
  for (std::size_t i = mag.size(); i-- > 0;) {
    unsigned __int128 cur = (rem << 64) | mag[i];
    mag[i] = static_cast<std::uint64_t>(cur / divisor);
    rem = cur % divisor;
  }
  if (rem != 0) return out;

  EdgeId id = EdgeId::from_limbs(std::move(mag));
  std::uint64_t expected = field::mul(field::from_i64(phi), field::pow(z, tau_exponent(prf, id)));
  if (expected != t[1]) return out;
  out.kind = DecodeKind::kOneSparse;
  out.id = std::move(id);
  out.weight = phi;
  return out;
}

void write_tester(ByteWriter& out, const std::uint64_t* t, std::size_t alpha_limbs) {
  out.u16(static_cast<std::uint16_t>(alpha_limbs));
  for (std::size_t i = 0; i < alpha_limbs; ++i) out.u64(t[2 + i]);
  out.i64(static_cast<std::int64_t>(t[0]));
  out.u64(t[1]);
}

void read_tester(ByteReader& in, std::uint64_t* t, std::size_t alpha_limbs) {
  if (in.u16() != alpha_limbs) throw InputError("tester width does not match the configuration");
  for (std::size_t i = 0; i < alpha_limbs; ++i) t[2 + i] = in.u64();
  t[0] = static_cast<std::uint64_t>(in.i64());
  t[1] = in.u64();
  if (t[1] >= field::kP) throw InputError("tester tau is not a field element");
}

OneSparseTester::OneSparseTester(const Prf& prf, std::uint32_t instance, std::size_t alpha_limbs)
    : prf_(prf),
      instance_(instance),
      alpha_limbs_(alpha_limbs),
      z_(tau_point(prf, instance)),
      words_(tester_words(alpha_limbs), 0) {}

void OneSparseTester::update(const EdgeId& id, std::int64_t delta) {
  tester_add(words_.data(), alpha_limbs_, id.limbs(), delta, field::pow(z_, tau_exponent(prf_, id)));
}

TesterDecode OneSparseTester::decode() const { return tester_decode(words_.data(), alpha_limbs_, z_, prf_); }

OneSparseTester& OneSparseTester::operator+=(const OneSparseTester& other) {
  if (!(prf_ == other.prf_) || instance_ != other.instance_ || alpha_limbs_ != other.alpha_limbs_) {
    throw ConfigMismatch("testers have different seeds or widths");
  }
  tester_accumulate(words_.data(), other.words_.data(), alpha_limbs_);
  return *this;
}

std::vector<std::uint8_t> OneSparseTester::serialize() const {
  ByteWriter out;
  write_tester(out, words_.data(), alpha_limbs_);
  return out.take();
}

}  // namespace hypersketch
