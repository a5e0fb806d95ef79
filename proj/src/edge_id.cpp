#include "hypersketch/edge_id.hpp"

#include <algorithm>
#include <bit>

namespace hypersketch {

EdgeId::EdgeId(std::uint64_t value) {
  if (value != 0) limbs_.push_back(value);
}

EdgeId EdgeId::from_limbs(std::vector<std::uint64_t> limbs) {
  EdgeId id;
  id.limbs_ = std::move(limbs);
  id.normalize();
  return id;
}

void EdgeId::normalize() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

bool EdgeId::test(std::size_t bit) const {
  std::size_t limb = bit / 64;
  if (limb >= limbs_.size()) return false;
  return (limbs_[limb] >> (bit % 64)) & 1u;
}

void EdgeId::set(std::size_t bit) {
  std::size_t limb = bit / 64;
  if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
  limbs_[limb] |= std::uint64_t{1} << (bit % 64);
}

std::size_t EdgeId::popcount() const {
  std::size_t total = 0;
  for (auto l : limbs_) total += static_cast<std::size_t>(std::popcount(l));
  return total;
}

std::size_t EdgeId::bit_width() const {
  if (limbs_.empty()) return 0;
  return 64 * (limbs_.size() - 1) + static_cast<std::size_t>(std::bit_width(limbs_.back()));
}

std::optional<std::uint64_t> EdgeId::to_u64() const {
  if (limbs_.size() > 1) return std::nullopt;
  return limbs_.empty() ? 0 : limbs_[0];
}

std::string EdgeId::to_decimal() const {
  if (limbs_.empty()) return "0";
  std::vector<std::uint64_t> work = limbs_;
  std::string digits;
  // Repeated division by 10^18, most significant limb first.
  constexpr std::uint64_t kChunk = 1000000000000000000ull;
  while (!work.empty()) {
    unsigned __int128 rem = 0;
    for (std::size_t i = work.size(); i-- > 0;) {
      unsigned __int128 cur = (rem << 64) | work[i];
      work[i] = static_cast<std::uint64_t>(cur / kChunk);
      rem = cur % kChunk;
    }
    while (!work.empty() && work.back() == 0) work.pop_back();
    std::string part = std::to_string(static_cast<std::uint64_t>(rem));
    if (!work.empty()) part.insert(0, 18 - part.size(), '0');
    digits.insert(0, part);
  }
  return digits;
}

std::strong_ordering operator<=>(const EdgeId& a, const EdgeId& b) {
  if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() <=> b.limbs_.size();
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
  }
  return std::strong_ordering::equal;
}

}  // namespace hypersketch
