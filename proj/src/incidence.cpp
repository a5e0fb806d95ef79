#include "hypersketch/incidence.hpp"

#include <algorithm>
#include <unordered_map>

#include "hypersketch/errors.hpp"
#include "hypersketch/field.hpp"
#include "hypersketch/one_sparse.hpp"

namespace hypersketch {

namespace {

constexpr std::uint16_t kFormatVersion = 1;
constexpr std::uint8_t kKindSamplerBank = 1;
constexpr std::uint8_t kKindConnectivity = 2;
constexpr std::uint8_t kKindSketch = 3;
// Refuse to allocate more than 2 GiB of testers.
constexpr std::size_t kMaxWords = std::size_t{1} << 28;

void write_header(ByteWriter& out, std::uint8_t kind, const SketchConfig& config, const Prf& prf) {
  static constexpr std::uint8_t kMagic[4] = {'H', 'S', 'K', 'B'};
  out.raw(kMagic);
  out.u16(kFormatVersion);
  out.u8(kind);
  out.u64(config.hash());
  out.raw(prf.commitment());
  out.str(config.canonical());
}

void check_header(ByteReader& in, std::uint8_t kind, const SketchConfig& config) {
  auto magic = in.raw(4);
  if (!std::equal(magic.begin(), magic.end(), "HSKB")) throw InputError("not a sketch file (bad magic)");
  if (in.u16() != kFormatVersion) throw InputError("unsupported sketch format version");
  if (in.u8() != kind) throw InputError("sketch file holds a different kind of bank");
  std::uint64_t hash = in.u64();
  auto commitment = in.raw(32);
  std::string canonical = in.str();
  if (hash != config.hash() || canonical != config.canonical()) {
    throw ConfigMismatch("sketch was built with a different configuration: " + canonical);
  }
  auto expected = Prf(config.seed).commitment();
  if (!std::equal(commitment.begin(), commitment.end(), expected.begin())) {
    throw ConfigMismatch("sketch was built with a different seed");
  }
}

std::vector<std::uint64_t> tau_points(const Prf& prf, std::size_t reps) {
  std::vector<std::uint64_t> z;
  for (std::size_t q = 0; q < reps; ++q) z.push_back(tau_point(prf, static_cast<std::uint32_t>(q)));
  return z;
}

struct DenseSink {
  IncidenceStore& store;
  std::size_t stride;
  std::size_t alpha_limbs;

  void add(std::size_t family, Vertex v, std::size_t tester, std::span<const std::uint64_t> id,
           std::int64_t scale, std::uint64_t z_pow) {
    tester_add(store.slice(family, v) + tester * stride, alpha_limbs, id, scale, z_pow);
  }
};

// Accumulates testers keyed by (vertex, per-vertex slot).
struct SparseSink {
  std::size_t slot_base = 0;
  std::size_t testers_per_sampler = 0;
  std::size_t alpha_limbs = 1;
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> words;

  void add(std::size_t family, Vertex v, std::size_t tester, std::span<const std::uint64_t> id,
           std::int64_t scale, std::uint64_t z_pow) {
    std::uint64_t slot = slot_base + family * testers_per_sampler + tester;
    std::uint64_t key = (static_cast<std::uint64_t>(v) << 32) | slot;
    std::size_t stride = tester_words(alpha_limbs);
    auto [it, fresh] = index.emplace(key, keys.size());
    if (fresh) {
      keys.push_back(key);
      words.resize(words.size() + stride, 0);
    }
    tester_add(words.data() + it->second * stride, alpha_limbs, id, scale, z_pow);
  }

  std::vector<VertexFragment> fragments() const {
    std::vector<std::size_t> order(keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::size_t stride = tester_words(alpha_limbs);
    std::vector<VertexFragment> out;
    for (std::size_t i : order) {
      const std::uint64_t* t = words.data() + i * stride;
      if (tester_is_zero(t, alpha_limbs)) continue;
      auto v = static_cast<Vertex>(keys[i] >> 32);
      if (out.empty() || out.back().vertex != v) out.push_back(VertexFragment{v, {}, {}});
      out.back().slots.push_back(static_cast<std::uint32_t>(keys[i] & 0xffffffffu));
      out.back().words.insert(out.back().words.end(), t, t + stride);
    }
    return out;
  }
};

void extract_vertex(const IncidenceStore& store, Vertex v, std::size_t slot_base, VertexFragment& out) {
  std::size_t stride = tester_words(store.shape().alpha_limbs);
  std::size_t per_sampler = store.shape().testers();
  for (std::size_t f = 0; f < store.families(); ++f) {
    const std::uint64_t* base = store.slice(f, v);
    for (std::size_t t = 0; t < per_sampler; ++t) {
      const std::uint64_t* w = base + t * stride;
      if (tester_is_zero(w, store.shape().alpha_limbs)) continue;
      out.slots.push_back(static_cast<std::uint32_t>(slot_base + f * per_sampler + t));
      out.words.insert(out.words.end(), w, w + stride);
    }
  }
}

}  // namespace

std::int64_t incidence_coefficient(const Hyperedge& e, Vertex v) {
  if (!e.contains(v)) return 0;
  if (v == e.max_vertex()) return -static_cast<std::int64_t>(e.arity() - 1);
  return 1;
}

std::size_t VertexFragment::byte_size(std::size_t alpha_limbs) const {
  // vertex + count, then per slot: slot id and the serialized tester.
  return 8 + slots.size() * (4 + 2 + 8 * alpha_limbs + 16);
}

void fragment_accumulate(VertexFragment& dst, const VertexFragment& src, std::size_t alpha_limbs) {
  if (dst.vertex != src.vertex) throw InputError("cannot add fragments of different vertices");
  std::size_t stride = tester_words(alpha_limbs);
  VertexFragment out{dst.vertex, {}, {}};
  std::size_t i = 0, j = 0;
  auto emit = [&](std::uint32_t slot, const std::uint64_t* w) {
    if (tester_is_zero(w, alpha_limbs)) return;
    out.slots.push_back(slot);
    out.words.insert(out.words.end(), w, w + stride);
  };
  std::vector<std::uint64_t> tmp(stride);
  while (i < dst.slots.size() || j < src.slots.size()) {
    if (j == src.slots.size() || (i < dst.slots.size() && dst.slots[i] < src.slots[j])) {
      emit(dst.slots[i], dst.words.data() + i * stride);
      ++i;
    } else if (i == dst.slots.size() || src.slots[j] < dst.slots[i]) {
      emit(src.slots[j], src.words.data() + j * stride);
      ++j;
    } else {
      std::copy_n(dst.words.data() + i * stride, stride, tmp.data());
      tester_accumulate(tmp.data(), src.words.data() + j * stride, alpha_limbs);
      emit(dst.slots[i], tmp.data());
      ++i;
      ++j;
    }
  }
  dst = std::move(out);
}

IncidenceStore::IncidenceStore(std::size_t families, std::size_t n, L0Shape shape, bool allocate)
    : families_(families), n_(n), shape_(shape) {
  if (!allocate) return;
  std::size_t total = families * n * shape.words();
  if (total > kMaxWords) {
    throw CapExceeded("sketch would need " + std::to_string(total * 8) +
                      " bytes; lower rep_cap, m_max or raise delta");
  }
  words_.assign(total, 0);
}

std::vector<std::uint64_t> IncidenceStore::component_words(std::size_t family, std::span<const Vertex> c) const {
  std::vector<std::uint64_t> out(slice_words(), 0);
  std::size_t stride = tester_words(shape_.alpha_limbs);
  for (Vertex v : c) {
    const std::uint64_t* s = slice(family, v);
    for (std::size_t t = 0; t < shape_.testers(); ++t) {
      tester_accumulate(out.data() + t * stride, s + t * stride, shape_.alpha_limbs);
    }
  }
  return out;
}

bool IncidenceStore::component_is_zero(std::size_t family, std::span<const Vertex> c) const {
  auto w = component_words(family, c);
  return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
}

bool IncidenceStore::range_is_zero(std::size_t first_family, std::size_t count) const {
  auto begin = words_.begin() + static_cast<std::ptrdiff_t>(first_family * n_ * slice_words());
  auto end = begin + static_cast<std::ptrdiff_t>(count * n_ * slice_words());
  return std::all_of(begin, end, [](std::uint64_t x) { return x == 0; });
}

IncidenceStore IncidenceStore::families_slice(std::size_t first_family, std::size_t count) const {
  IncidenceStore out;
  out.families_ = count;
  out.n_ = n_;
  out.shape_ = shape_;
  auto begin = words_.begin() + static_cast<std::ptrdiff_t>(first_family * n_ * slice_words());
  out.words_.assign(begin, begin + static_cast<std::ptrdiff_t>(count * n_ * slice_words()));
  return out;
}

void IncidenceStore::accumulate(const IncidenceStore& other) {
  if (!(families_ == other.families_ && n_ == other.n_ && shape_ == other.shape_)) {
    throw ConfigMismatch("incidence stores have different layouts");
  }
  std::size_t stride = tester_words(shape_.alpha_limbs);
  std::size_t count = words_.size() / stride;
  for (std::size_t i = 0; i < count; ++i) {
    tester_accumulate(words_.data() + i * stride, other.words_.data() + i * stride, shape_.alpha_limbs);
  }
}

// Only nonzero testers are written, as (index, tester) in index order.
void IncidenceStore::write(ByteWriter& out) const {
  out.u64(families_);
  out.u32(static_cast<std::uint32_t>(n_));
  out.u32(static_cast<std::uint32_t>(shape_.reps));
  out.u32(static_cast<std::uint32_t>(shape_.levels));
  std::size_t stride = tester_words(shape_.alpha_limbs);
  std::size_t count = words_.size() / stride;
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < count; ++i) {
    if (!tester_is_zero(words_.data() + i * stride, shape_.alpha_limbs)) live.push_back(i);
  }
  out.u64(live.size());
  for (std::size_t i : live) {
    out.u64(i);
    write_tester(out, words_.data() + i * stride, shape_.alpha_limbs);
  }
}

void IncidenceStore::read(ByteReader& in) {
  if (in.u64() != families_ || in.u32() != n_ || in.u32() != shape_.reps || in.u32() != shape_.levels) {
    throw ConfigMismatch("sketch layout does not match the configuration");
  }
  std::size_t stride = tester_words(shape_.alpha_limbs);
  std::size_t count = words_.size() / stride;
  std::fill(words_.begin(), words_.end(), 0);
  std::uint64_t live = in.u64();
  if (live > count) throw InputError("sketch file lists more testers than the layout holds");
  std::uint64_t previous = 0;
  for (std::uint64_t k = 0; k < live; ++k) {
    std::uint64_t i = in.u64();
    if (i >= count || (k > 0 && i <= previous)) throw InputError("sketch file has a bad tester index");
    read_tester(in, words_.data() + i * stride, shape_.alpha_limbs);
    previous = i;
  }
}

// ---------------------------------------------------------------- SamplerBank

SamplerBank::SamplerBank(const SketchConfig& config) : SamplerBank(config, 0, config.stages()) {}

SamplerBank::SamplerBank(const SketchConfig& config, std::size_t first_stage, std::size_t stage_count, bool allocate)
    : config_(config), prf_(config.seed), first_stage_(first_stage), stage_count_(stage_count) {
  config_.validate();
  z_ = tau_points(prf_, config_.sampler_reps());
  L0Shape shape{config_.sampler_levels(), config_.sampler_reps(), config_.alpha_limbs()};
  store_ = IncidenceStore(stage_count_ * families_per_stage(), config_.n, shape, allocate);
}

std::size_t SamplerBank::families_per_stage() const {
  return config_.fingerprint_levels() * config_.rates() * config_.reps();
}

std::size_t SamplerBank::sampler_count() const { return store_.families() * config_.n; }

std::size_t SamplerBank::family_number(const FamilyIndex& f) const {
  if (f.stage < first_stage_ || f.stage >= first_stage_ + stage_count_ || f.level >= config_.fingerprint_levels() ||
      f.rate >= config_.rates() || f.rep >= config_.reps()) {
    throw InputError("sampler family out of range");
  }
  return (f.stage - first_stage_) * families_per_stage() + (f.level * config_.rates() + f.rate) * config_.reps() +
         f.rep;
}

std::size_t stage_filter_depth(const Prf& prf, const EdgeId& id, std::size_t stages) {
  return geometric_depth(prf.word(PrfTag{Domain::kStageFilter, {}}, id.limbs()), stages - 1);
}

std::size_t SamplerBank::stage_depth(const EdgeId& id) const {
  return stage_filter_depth(prf_, id, config_.stages());
}

bool SamplerBank::admits(const Hyperedge& e, std::size_t stage) const {
  return stage_depth(canonical_id(e, config_.n)) >= stage;
}

PrfTag SamplerBank::membership_tag(const FamilyIndex& f) const {
  return PrfTag{Domain::kMembership,
                {static_cast<std::uint32_t>(f.stage), static_cast<std::uint32_t>(f.level),
                 static_cast<std::uint32_t>(f.rate), static_cast<std::uint32_t>(f.rep)}};
}

std::vector<Vertex> SamplerBank::fingerprint(const Hyperedge& e, const FamilyIndex& f) const {
  EdgeId id = canonical_id(e, config_.n);
  auto s = static_cast<std::uint32_t>(f.stage);
  auto t = static_cast<std::uint32_t>(f.rep);
  auto l = static_cast<std::uint32_t>(f.level);
  CoinStream level_coins(prf_.word(PrfTag{Domain::kFingerprintLevel, {s, t, 0, 0}}, id.limbs()));
  CoinStream rate_coins(prf_.word(PrfTag{Domain::kFingerprintRate, {s, l, t, 0}}, id.limbs()));
  std::vector<Vertex> out;
  for (Vertex v : e.vertices()) {
    bool level_ok = geometric_depth(level_coins.next(), config_.fingerprint_levels() - 1) >= f.level;
    bool rate_ok = geometric_depth(rate_coins.next(), config_.rates() - 1) >= f.rate;
    if (level_ok && rate_ok) out.push_back(v);
  }
  return out;
}

template <class Sink>
void SamplerBank::encode(const Hyperedge& e, std::int64_t delta, std::size_t from_stage, Sink& sink) const {
  if (e.arity() > config_.r_max) {
    throw InputError("edge " + e.to_string() + " exceeds arity bound " + std::to_string(config_.r_max));
  }
  EdgeId id = canonical_id(e, config_.n);
  auto limbs = id.limbs();
  std::size_t lo = std::max(from_stage, first_stage_);
  std::size_t hi = std::min(stage_depth(id), first_stage_ + stage_count_ - 1);
  if (lo > hi) return;

  const L0Shape& shape = store_.shape();
  std::uint32_t h = tau_exponent(prf_, id);
  std::vector<std::uint64_t> z_pow(shape.reps);
  for (std::size_t q = 0; q < shape.reps; ++q) z_pow[q] = field::pow(z_[q], h);

  const std::size_t arity = e.arity();
  const std::size_t levels = config_.fingerprint_levels();
  const std::size_t rates = config_.rates();
  const std::size_t reps = config_.reps();
  std::vector<std::size_t> level_depth(arity), rate_depth(arity), member(shape.reps);
  std::vector<std::size_t> kept;
  kept.reserve(arity);

  for (std::size_t s = lo; s <= hi; ++s) {
    for (std::size_t t = 0; t < reps; ++t) {
      CoinStream level_coins(prf_.word(
          PrfTag{Domain::kFingerprintLevel, {static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t), 0, 0}},
          limbs));
      for (std::size_t k = 0; k < arity; ++k) level_depth[k] = geometric_depth(level_coins.next(), levels - 1);
      for (std::size_t l = 0; l < levels; ++l) {
        CoinStream rate_coins(prf_.word(PrfTag{Domain::kFingerprintRate,
                                               {static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(l),
                                                static_cast<std::uint32_t>(t), 0}},
                                        limbs));
        for (std::size_t k = 0; k < arity; ++k) rate_depth[k] = geometric_depth(rate_coins.next(), rates - 1);
        bool any_at_level = false;
        for (std::size_t rho = 0; rho < rates; ++rho) {
          kept.clear();
          for (std::size_t k = 0; k < arity; ++k) {
            if (level_depth[k] >= l && rate_depth[k] >= rho) kept.push_back(k);
          }
          // Fingerprints shrink as the rate drops, so nothing further survives.
          if (kept.size() < 2) break;
          any_at_level = true;
          FamilyIndex f{s, l, rho, t};
          std::size_t fam = family_number(f);
          membership_depths(prf_, membership_tag(f), limbs, shape.reps, shape.levels, member.data());
          auto top = static_cast<std::int64_t>(kept.size() - 1);
          for (std::size_t k : kept) {
            std::int64_t coef = (k == kept.back()) ? -top : 1;
            std::int64_t scale = coef * delta;
            Vertex v = e.vertices()[k];
            for (std::size_t q = 0; q < shape.reps; ++q) {
              for (std::size_t j = 0; j <= member[q]; ++j) {
                sink.add(fam, v, q * shape.levels + j, limbs, scale, z_pow[q]);
              }
            }
          }
        }
        // Level fingerprints are nested as well.
        if (!any_at_level) break;
      }
    }
  }
}

void SamplerBank::update(const Hyperedge& e, std::int64_t delta) {
  DenseSink sink{store_, tester_words(store_.shape().alpha_limbs), store_.shape().alpha_limbs};
  encode(e, delta, 0, sink);
}

void SamplerBank::remove_recovered(const EdgeMultiset& edges, std::size_t from_stage) {
  DenseSink sink{store_, tester_words(store_.shape().alpha_limbs), store_.shape().alpha_limbs};
  for (const auto& [e, mult] : edges) encode(e, -mult, from_stage, sink);
}

void SamplerBank::merge(const SamplerBank& other) {
  if (config_.hash() != other.config_.hash() || !(prf_ == other.prf_)) {
    throw ConfigMismatch("cannot merge banks with different configurations or seeds");
  }
  if (first_stage_ != other.first_stage_ || stage_count_ != other.stage_count_) {
    throw ConfigMismatch("cannot merge banks holding different stages");
  }
  store_.accumulate(other.store_);
}

SamplerBank SamplerBank::stage_slice(std::size_t stage) const {
  if (stage < first_stage_ || stage >= first_stage_ + stage_count_) throw InputError("stage out of range");
  SamplerBank out(config_, stage, 0);
  out.stage_count_ = 1;
  out.store_ = store_.families_slice((stage - first_stage_) * families_per_stage(), families_per_stage());
  return out;
}

bool SamplerBank::stage_is_zero(std::size_t stage) const {
  if (stage < first_stage_ || stage >= first_stage_ + stage_count_) return true;
  return store_.range_is_zero((stage - first_stage_) * families_per_stage(), families_per_stage());
}

bool SamplerBank::is_zero() const { return store_.range_is_zero(0, store_.families()); }

L0Sampler SamplerBank::component_sampler(const FamilyIndex& f, std::span<const Vertex> c) const {
  return L0Sampler(store_.shape(), prf_, membership_tag(f), store_.component_words(family_number(f), c));
}

bool SamplerBank::component_is_zero(const FamilyIndex& f, std::span<const Vertex> c) const {
  return store_.component_is_zero(family_number(f), c);
}

void SamplerBank::write(ByteWriter& out) const {
  write_header(out, kKindSamplerBank, config_, prf_);
  out.u32(static_cast<std::uint32_t>(first_stage_));
  out.u32(static_cast<std::uint32_t>(stage_count_));
  store_.write(out);
}

SamplerBank SamplerBank::read(ByteReader& in, const SketchConfig& config) {
  check_header(in, kKindSamplerBank, config);
  std::size_t first = in.u32();
  std::size_t count = in.u32();
  if (first + count > config.stages() || count == 0) throw InputError("sketch stage range is invalid");
  SamplerBank out(config, first, count);
  out.store_.read(in);
  return out;
}

std::vector<std::uint8_t> SamplerBank::serialize() const {
  ByteWriter out;
  write(out);
  return out.take();
}

SamplerBank SamplerBank::deserialize(std::span<const std::uint8_t> bytes, const SketchConfig& config) {
  ByteReader in(bytes);
  auto out = read(in, config);
  if (!in.done()) throw InputError("trailing bytes after sampler bank");
  return out;
}

// ----------------------------------------------------------- ConnectivityBank

ConnectivityBank::ConnectivityBank(const SketchConfig& config, bool allocate) : config_(config), prf_(config.seed) {
  config_.validate();
  z_ = tau_points(prf_, config_.sampler_reps());
  L0Shape shape{config_.conn_levels(), config_.sampler_reps(), config_.alpha_limbs()};
  store_ = IncidenceStore(config_.conn_stages() * config_.conn_copies(), config_.n, shape, allocate);
}

std::size_t ConnectivityBank::stage_depth(const EdgeId& id) const {
  return geometric_depth(prf_.word(PrfTag{Domain::kConnFilter, {}}, id.limbs()), stages() - 1);
}

PrfTag ConnectivityBank::membership_tag(std::size_t stage, std::size_t copy) const {
  return PrfTag{Domain::kConnMembership, {static_cast<std::uint32_t>(stage), static_cast<std::uint32_t>(copy), 0, 0}};
}

template <class Sink>
void ConnectivityBank::encode(const Hyperedge& e, std::int64_t delta, Sink& sink) const {
  if (e.arity() > config_.r_max) {
    throw InputError("edge " + e.to_string() + " exceeds arity bound " + std::to_string(config_.r_max));
  }
  EdgeId id = canonical_id(e, config_.n);
  auto limbs = id.limbs();
  const L0Shape& shape = store_.shape();
  std::uint32_t h = tau_exponent(prf_, id);
  std::vector<std::uint64_t> z_pow(shape.reps);
  for (std::size_t q = 0; q < shape.reps; ++q) z_pow[q] = field::pow(z_[q], h);
  std::vector<std::size_t> member(shape.reps);
  std::size_t depth = stage_depth(id);
  for (std::size_t s = 0; s <= depth; ++s) {
    for (std::size_t c = 0; c < copies(); ++c) {
      std::size_t fam = s * copies() + c;
      membership_depths(prf_, membership_tag(s, c), limbs, shape.reps, shape.levels, member.data());
      for (Vertex v : e.vertices()) {
        std::int64_t scale = incidence_coefficient(e, v) * delta;
        for (std::size_t q = 0; q < shape.reps; ++q) {
          for (std::size_t j = 0; j <= member[q]; ++j) sink.add(fam, v, q * shape.levels + j, limbs, scale, z_pow[q]);
        }
      }
    }
  }
}

void ConnectivityBank::update(const Hyperedge& e, std::int64_t delta) {
  DenseSink sink{store_, tester_words(store_.shape().alpha_limbs), store_.shape().alpha_limbs};
  encode(e, delta, sink);
}

void ConnectivityBank::merge(const ConnectivityBank& other) {
  if (config_.hash() != other.config_.hash() || !(prf_ == other.prf_)) {
    throw ConfigMismatch("cannot merge banks with different configurations or seeds");
  }
  store_.accumulate(other.store_);
}

bool ConnectivityBank::stage_is_zero(std::size_t stage) const {
  if (stage >= stages()) return true;
  return store_.range_is_zero(stage * copies(), copies());
}

bool ConnectivityBank::is_zero() const { return store_.range_is_zero(0, store_.families()); }

L0Sampler ConnectivityBank::component_sampler(std::size_t stage, std::size_t copy, std::span<const Vertex> c) const {
  if (stage >= stages() || copy >= copies()) throw InputError("connectivity sampler out of range");
  return L0Sampler(store_.shape(), prf_, membership_tag(stage, copy), store_.component_words(stage * copies() + copy, c));
}

void ConnectivityBank::write(ByteWriter& out) const {
  write_header(out, kKindConnectivity, config_, prf_);
  store_.write(out);
}

ConnectivityBank ConnectivityBank::read(ByteReader& in, const SketchConfig& config) {
  check_header(in, kKindConnectivity, config);
  ConnectivityBank out(config);
  out.store_.read(in);
  return out;
}

std::vector<std::uint8_t> ConnectivityBank::serialize() const {
  ByteWriter out;
  write(out);
  return out.take();
}

ConnectivityBank ConnectivityBank::deserialize(std::span<const std::uint8_t> bytes, const SketchConfig& config) {
  ByteReader in(bytes);
  auto out = read(in, config);
  if (!in.done()) throw InputError("trailing bytes after connectivity bank");
  return out;
}

// -------------------------------------------------------------- EncodedSketch

void EncodedSketch::update(const Hyperedge& e, std::int64_t delta) {
  bank.update(e, delta);
  conn.update(e, delta);
}

void EncodedSketch::merge(const EncodedSketch& other) {
  bank.merge(other.bank);
  conn.merge(other.conn);
}

std::vector<VertexFragment> EncodedSketch::encode_fragments(const SketchConfig& config, const EdgeMultiset& edges) {
  // Layout and seeds only; nothing dense is allocated.
  SamplerBank b(config, 0, config.stages(), false);
  ConnectivityBank c(config, false);
  SparseSink sink;
  sink.alpha_limbs = config.alpha_limbs();
  sink.testers_per_sampler = b.store().shape().testers();
  for (const auto& [e, w] : edges) b.encode(e, w, 0, sink);
  sink.slot_base = b.slots_per_vertex();
  sink.testers_per_sampler = c.store().shape().testers();
  for (const auto& [e, w] : edges) c.encode(e, w, sink);
  return sink.fragments();
}

std::vector<VertexFragment> EncodedSketch::fragments() const {
  std::vector<VertexFragment> out;
  for (std::size_t v = 0; v < bank.config().n; ++v) {
    VertexFragment f{static_cast<Vertex>(v), {}, {}};
    extract_vertex(bank.store(), f.vertex, 0, f);
    extract_vertex(conn.store(), f.vertex, bank.slots_per_vertex(), f);
    if (!f.slots.empty()) out.push_back(std::move(f));
  }
  return out;
}

void EncodedSketch::add_fragment(const VertexFragment& fragment) {
  std::size_t alpha = bank.config().alpha_limbs();
  std::size_t stride = tester_words(alpha);
  if (fragment.vertex >= bank.config().n) throw InputError("fragment vertex out of range");
  std::size_t bank_slots = bank.slots_per_vertex();
  std::size_t conn_slots = conn.slots_per_vertex();
  for (std::size_t i = 0; i < fragment.slots.size(); ++i) {
    std::size_t slot = fragment.slots[i];
    IncidenceStore* store = &bank.store();
    if (slot >= bank_slots) {
      slot -= bank_slots;
      store = &conn.store();
      if (slot >= conn_slots) throw InputError("fragment slot out of range");
    }
    std::size_t per = store->shape().testers();
    std::uint64_t* dst = store->slice(slot / per, fragment.vertex) + (slot % per) * stride;
    tester_accumulate(dst, fragment.words.data() + i * stride, alpha);
  }
}

std::vector<std::uint8_t> EncodedSketch::serialize() const {
  ByteWriter out;
  write_header(out, kKindSketch, bank.config(), bank.prf());
  bank.write(out);
  conn.write(out);
  return out.take();
}

EncodedSketch EncodedSketch::deserialize(std::span<const std::uint8_t> bytes, const SketchConfig& config) {
  ByteReader in(bytes);
  check_header(in, kKindSketch, config);
  auto b = SamplerBank::read(in, config);
  auto c = ConnectivityBank::read(in, config);
  if (!in.done()) throw InputError("trailing bytes after sketch");
  return EncodedSketch(std::move(b), std::move(c));
}

SketchConfig sketch_file_config(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  auto magic = in.raw(4);
  if (!std::equal(magic.begin(), magic.end(), "HSKB")) throw InputError("not a sketch file (bad magic)");
  if (in.u16() != kFormatVersion) throw InputError("unsupported sketch format version");
  in.u8();
  in.u64();
  in.raw(32);
  return SketchConfig::from_json(in.str());
}

}  // namespace hypersketch
