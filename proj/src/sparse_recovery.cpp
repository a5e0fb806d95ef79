#include "hypersketch/sparse_recovery.hpp"

#include <algorithm>
#include <optional>

#include "hypersketch/bytes.hpp"
#include "hypersketch/errors.hpp"
#include "hypersketch/field.hpp"

namespace hypersketch {

namespace {

// Berlekamp-Massey over F_p. Returns the connection polynomial
// C(x) = 1 + c_1 x + ... + c_L x^L of the shortest recurrence.
std::vector<std::uint64_t> berlekamp_massey(const std::vector<std::uint64_t>& seq) {
  using namespace field;
  std::vector<std::uint64_t> c{1}, b{1};
  std::size_t len = 0, shift = 1;
  std::uint64_t last = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::uint64_t d = seq[i];
    for (std::size_t k = 1; k <= len; ++k) d = add(d, mul(c[k], seq[i - k]));
    if (d == 0) {
      ++shift;
      continue;
    }
    std::uint64_t coef = mul(d, inverse(last));
    std::vector<std::uint64_t> prev = c;
    if (c.size() < b.size() + shift) c.resize(b.size() + shift, 0);
    for (std::size_t k = 0; k < b.size(); ++k) c[k + shift] = sub(c[k + shift], mul(coef, b[k]));
    if (2 * len <= i) {
      len = i + 1 - len;
      b = std::move(prev);
      last = d;
      shift = 1;
    } else {
      ++shift;
    }
  }
  c.resize(len + 1, 0);
  return c;
}

// Solves sum_j v_j a_j^k = rhs_k for k < L by Gaussian elimination.
std::optional<std::vector<std::uint64_t>> solve_vandermonde(const std::vector<std::uint64_t>& points,
                                                            const std::vector<std::uint64_t>& rhs) {
  using namespace field;
  std::size_t L = points.size();
  std::vector<std::vector<std::uint64_t>> m(L, std::vector<std::uint64_t>(L + 1));
  for (std::size_t k = 0; k < L; ++k) {
    for (std::size_t j = 0; j < L; ++j) m[k][j] = pow(points[j], k);
    m[k][L] = rhs[k];
  }
  for (std::size_t col = 0; col < L; ++col) {
    std::size_t pivot = col;
    while (pivot < L && m[pivot][col] == 0) ++pivot;
    if (pivot == L) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::uint64_t inv = inverse(m[col][col]);
    for (auto& x : m[col]) x = mul(x, inv);
    for (std::size_t r = 0; r < L; ++r) {
      if (r == col || m[r][col] == 0) continue;
      std::uint64_t f = m[r][col];
      for (std::size_t k = col; k <= L; ++k) m[r][k] = sub(m[r][k], mul(f, m[col][k]));
    }
  }
  std::vector<std::uint64_t> out(L);
  for (std::size_t j = 0; j < L; ++j) out[j] = m[j][L];
  return out;
}

std::int64_t to_signed(std::uint64_t v) {
  return v > field::kP / 2 ? -static_cast<std::int64_t>(field::kP - v) : static_cast<std::int64_t>(v);
}

}  // namespace

SparseRecoverySketch::SparseRecoverySketch(std::size_t s, std::uint64_t universe, const Prf& prf,
                                           std::uint32_t instance, std::size_t s_cap, std::int64_t value_bound)
    : s_(s), universe_(universe), prf_(prf), instance_(instance), value_bound_(value_bound) {
  if (s > s_cap) throw CapExceeded("sparsity " + std::to_string(s) + " exceeds cap " + std::to_string(s_cap));
  if (universe == 0 || universe >= field::kP) throw InputError("sparse recovery universe out of range");
  check_point_ = field::nonzero_element(prf_.word(PrfTag{Domain::kCheckpoint, {instance, 0, 0, 0}}, 0));
  syndrome_.assign(2 * s + 1, 0);
}

std::uint64_t SparseRecoverySketch::point(std::uint64_t id) const {
  return field::nonzero_element(prf_.word(PrfTag{Domain::kSyndromePoint, {instance_, 0, 0, 0}}, id));
}

void SparseRecoverySketch::update(std::uint64_t id, std::int64_t delta) {
  using namespace field;
  if (id >= universe_) throw InputError("id outside the sparse recovery universe");
  std::uint64_t d = from_i64(delta);
  std::uint64_t a = point(id);
  std::uint64_t power = 1;
  for (auto& s : syndrome_) {
    s = add(s, mul(d, power));
    power = mul(power, a);
  }
  checkpoint_ = add(checkpoint_, mul(d, pow(check_point_, id)));
}

SparseRecoveryResult SparseRecoverySketch::recover() const {
  using namespace field;
  SparseRecoveryResult out;
  bool all_zero = checkpoint_ == 0 && std::all_of(syndrome_.begin(), syndrome_.end(), [](auto v) { return v == 0; });
  if (all_zero) return out;
  out.dense = true;

  std::vector<std::uint64_t> head(syndrome_.begin(), syndrome_.begin() + static_cast<std::ptrdiff_t>(2 * s_));
  auto c = berlekamp_massey(head);
  std::size_t len = c.size() - 1;
  if (len == 0 || len > s_) return out;

  std::vector<std::uint64_t> ids, points;
  for (std::uint64_t id = 0; id < universe_ && ids.size() <= len; ++id) {
    std::uint64_t a = point(id);
    std::uint64_t acc = 1;
    for (std::size_t k = 1; k <= len; ++k) acc = add(mul(acc, a), c[k]);
    if (acc == 0) {
      ids.push_back(id);
      points.push_back(a);
    }
  }
  if (ids.size() != len) return out;

  auto values = solve_vandermonde(points, syndrome_);
  if (!values) return out;

  // Every power sum and the second-code evaluation must agree.
  for (std::size_t k = 0; k < syndrome_.size(); ++k) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < len; ++j) acc = add(acc, mul((*values)[j], pow(points[j], k)));
    if (acc != syndrome_[k]) return out;
  }
  std::uint64_t check = 0;
  for (std::size_t j = 0; j < len; ++j) check = add(check, mul((*values)[j], pow(check_point_, ids[j])));
  if (check != checkpoint_) return out;

  for (std::size_t j = 0; j < len; ++j) {
    std::int64_t v = to_signed((*values)[j]);
    if (v == 0 || v > value_bound_ || v < -value_bound_) {
      out.entries.clear();
      return out;
    }
    out.entries[ids[j]] = v;
  }
  out.dense = false;
  return out;
}

SparseRecoverySketch& SparseRecoverySketch::operator+=(const SparseRecoverySketch& other) {
  if (s_ != other.s_ || universe_ != other.universe_ || !(prf_ == other.prf_) || instance_ != other.instance_) {
    throw ConfigMismatch("sparse recovery sketches have different parameters");
  }
  for (std::size_t k = 0; k < syndrome_.size(); ++k) syndrome_[k] = field::add(syndrome_[k], other.syndrome_[k]);
  checkpoint_ = field::add(checkpoint_, other.checkpoint_);
  return *this;
}

std::vector<std::uint8_t> SparseRecoverySketch::serialize() const {
  ByteWriter out;
  out.u32(static_cast<std::uint32_t>(s_));
  out.u64(universe_);
  for (auto v : syndrome_) out.u64(v);
  out.u64(checkpoint_);
  return out.take();
}

}  // namespace hypersketch
