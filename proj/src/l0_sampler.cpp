#include "hypersketch/l0_sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "hypersketch/errors.hpp"
#include "hypersketch/field.hpp"

namespace hypersketch {

std::size_t l0_levels(std::uint64_t support_bound) {
  if (support_bound < 1) support_bound = 1;
  return static_cast<std::size_t>(std::bit_width(support_bound));
}

std::size_t l0_reps(double delta, double c) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("sampler failure probability must lie in (0, 1)");
  double reps = std::ceil(c * std::log(1.0 / delta));
  return reps < 1.0 ? 1 : static_cast<std::size_t>(reps);
}

void membership_depths(const Prf& prf, const PrfTag& membership, std::span<const std::uint64_t> id,
                       std::size_t reps, std::size_t levels, std::size_t* out) {
  CoinStream coins(prf.word(membership, id));
  for (std::size_t q = 0; q < reps; ++q) out[q] = geometric_depth(coins.next(), levels - 1);
}

L0Sampler::L0Sampler(L0Shape shape, Prf prf, PrfTag membership)
    : L0Sampler(shape, std::move(prf), membership, std::vector<std::uint64_t>(shape.words(), 0)) {}

L0Sampler::L0Sampler(L0Shape shape, Prf prf, PrfTag membership, std::vector<std::uint64_t> words)
    : shape_(shape), prf_(std::move(prf)), membership_(membership), words_(std::move(words)) {
  if (words_.size() != shape_.words()) throw InputError("sampler word count does not match its shape");
  z_.reserve(shape_.reps);
  for (std::size_t q = 0; q < shape_.reps; ++q) z_.push_back(tau_point(prf_, static_cast<std::uint32_t>(q)));
}

void L0Sampler::update(const EdgeId& id, std::int64_t delta) {
  std::vector<std::size_t> depth(shape_.reps);
  membership_depths(prf_, membership_, id.limbs(), shape_.reps, shape_.levels, depth.data());
  std::uint32_t h = tau_exponent(prf_, id);
  std::size_t stride = tester_words(shape_.alpha_limbs);
  for (std::size_t q = 0; q < shape_.reps; ++q) {
    std::uint64_t z_pow = field::pow(z_[q], h);
    for (std::size_t j = 0; j <= depth[q]; ++j) {
      tester_add(words_.data() + (q * shape_.levels + j) * stride, shape_.alpha_limbs, id.limbs(), delta, z_pow);
    }
  }
}

std::optional<Sample> L0Sampler::decode_at(std::size_t rep, std::size_t level, const IdFilter& accept) const {
  const std::uint64_t* t = words_.data() + (rep * shape_.levels + level) * tester_words(shape_.alpha_limbs);
  auto d = tester_decode(t, shape_.alpha_limbs, z_[rep], prf_);
  if (d.kind != DecodeKind::kOneSparse) return std::nullopt;
  if (accept && !accept(d.id)) return std::nullopt;
  return Sample{std::move(d.id), d.weight};
}

std::optional<Sample> L0Sampler::sample(const IdFilter& accept) const {
  for (std::size_t q = 0; q < shape_.reps; ++q) {
    for (std::size_t j = shape_.levels; j-- > 0;) {
      if (auto s = decode_at(q, j, accept)) return s;
    }
  }
  return std::nullopt;
}

std::vector<Sample> L0Sampler::harvest(const IdFilter& accept) const {
  std::vector<Sample> out;
  std::set<EdgeId> seen;
  for (std::size_t q = 0; q < shape_.reps; ++q) {
    for (std::size_t j = shape_.levels; j-- > 0;) {
      if (auto s = decode_at(q, j, accept)) {
        if (seen.insert(s->id).second) out.push_back(std::move(*s));
      }
    }
  }
  return out;
}

bool L0Sampler::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

void L0Sampler::check_compatible(const L0Sampler& other) const {
  if (!(shape_ == other.shape_) || !(prf_ == other.prf_) || membership_.domain != other.membership_.domain ||
      membership_.index != other.membership_.index) {
    throw ConfigMismatch("samplers have different shapes or seeds");
  }
}

L0Sampler& L0Sampler::operator+=(const L0Sampler& other) {
  check_compatible(other);
  std::size_t stride = tester_words(shape_.alpha_limbs);
  for (std::size_t i = 0; i < shape_.testers(); ++i) {
    tester_accumulate(words_.data() + i * stride, other.words_.data() + i * stride, shape_.alpha_limbs);
  }
  return *this;
}

L0Sampler& L0Sampler::operator-=(const L0Sampler& other) {
  check_compatible(other);
  std::size_t stride = tester_words(shape_.alpha_limbs);
  for (std::size_t i = 0; i < shape_.testers(); ++i) {
    tester_subtract(words_.data() + i * stride, other.words_.data() + i * stride, shape_.alpha_limbs);
  }
  return *this;
}

std::vector<std::uint8_t> L0Sampler::serialize() const {
  ByteWriter out;
  out.u32(static_cast<std::uint32_t>(shape_.reps));
  out.u32(static_cast<std::uint32_t>(shape_.levels));
  std::size_t stride = tester_words(shape_.alpha_limbs);
  for (std::size_t i = 0; i < shape_.testers(); ++i) write_tester(out, words_.data() + i * stride, shape_.alpha_limbs);
  return out.take();
}

}  // namespace hypersketch
