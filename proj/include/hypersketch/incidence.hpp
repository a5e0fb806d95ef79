#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hypersketch/bytes.hpp"
#include "hypersketch/config.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/l0_sampler.hpp"
#include "hypersketch/prf.hpp"

namespace hypersketch {

// Coefficient of vertex v in the column of edge e: +1 for every member
// except the largest, which gets -(|e| - 1). Zero if v is not in e.
std::int64_t incidence_coefficient(const Hyperedge& e, Vertex v);

// Deepest of `stages` nested rate-1/2 filters that admits the edge.
std::size_t stage_filter_depth(const Prf& prf, const EdgeId& id, std::size_t stages);

struct FamilyIndex {
  std::size_t stage = 0;
  std::size_t level = 0;
  std::size_t rate = 0;
  std::size_t rep = 0;
};

// Nonzero testers of one vertex, keyed by a per-vertex slot number.
struct VertexFragment {
  Vertex vertex = 0;
  std::vector<std::uint32_t> slots;  // strictly increasing
  std::vector<std::uint64_t> words;  // tester_words(alpha_limbs) per slot

  std::size_t byte_size(std::size_t alpha_limbs) const;
};

void fragment_accumulate(VertexFragment& dst, const VertexFragment& src, std::size_t alpha_limbs);

// Flat tester storage: family-major, then vertex, then the sampler's
// (rep, level) testers.
class IncidenceStore {
 public:
  IncidenceStore() = default;
  // allocate = false keeps only the layout (used for sparse encoding).
  IncidenceStore(std::size_t families, std::size_t n, L0Shape shape, bool allocate = true);

  std::uint64_t* slice(std::size_t family, Vertex v) { return words_.data() + (family * n_ + v) * slice_words(); }
  const std::uint64_t* slice(std::size_t family, Vertex v) const {
    return words_.data() + (family * n_ + v) * slice_words();
  }
  std::size_t slice_words() const { return shape_.words(); }
  std::size_t families() const { return families_; }
  const L0Shape& shape() const { return shape_; }
  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  std::vector<std::uint64_t> component_words(std::size_t family, std::span<const Vertex> c) const;
  bool component_is_zero(std::size_t family, std::span<const Vertex> c) const;
  bool range_is_zero(std::size_t first_family, std::size_t count) const;
  IncidenceStore families_slice(std::size_t first_family, std::size_t count) const;
  void accumulate(const IncidenceStore& other);

  void write(ByteWriter& out) const;
  void read(ByteReader& in);

  friend bool operator==(const IncidenceStore& a, const IncidenceStore& b) {
    return a.families_ == b.families_ && a.n_ == b.n_ && a.shape_ == b.shape_ && a.words_ == b.words_;
  }

 private:
  std::size_t families_ = 0;
  std::size_t n_ = 0;
  L0Shape shape_;
  std::vector<std::uint64_t> words_;
};

// The main linear sketch: for every stage, fingerprint level, fingerprint
// rate and repetition, one L0 sampler per vertex over the incidence
// encoding of the fingerprinted edge. Testers are keyed by the original
// edge id, so a decode names the edge itself.
class SamplerBank {
 public:
  explicit SamplerBank(const SketchConfig& config);

  const SketchConfig& config() const { return config_; }
  const Prf& prf() const { return prf_; }
  std::uint64_t tau_point_for(std::size_t rep) const { return z_[rep]; }
  std::size_t first_stage() const { return first_stage_; }
  std::size_t stage_count() const { return stage_count_; }
  std::size_t families_per_stage() const;
  std::size_t sampler_count() const;

  // Deepest stage whose nested filters admit e (0 = only stage 0).
  std::size_t stage_depth(const EdgeId& id) const;
  bool admits(const Hyperedge& e, std::size_t stage) const;
  // Surviving vertices of e in the given family.
  std::vector<Vertex> fingerprint(const Hyperedge& e, const FamilyIndex& f) const;
  PrfTag membership_tag(const FamilyIndex& f) const;
  L0Shape sampler_shape() const { return store_.shape(); }

  void update(const Hyperedge& e, std::int64_t delta);
  // Subtracts every edge (with its multiplicity) from stages >= from_stage.
  void remove_recovered(const EdgeMultiset& edges, std::size_t from_stage = 0);
  void merge(const SamplerBank& other);

  // A bank holding only the given stage, sharing config and seeds.
  SamplerBank stage_slice(std::size_t stage) const;
  bool stage_is_zero(std::size_t stage) const;
  bool is_zero() const;

  L0Sampler component_sampler(const FamilyIndex& f, std::span<const Vertex> c) const;
  bool component_is_zero(const FamilyIndex& f, std::span<const Vertex> c) const;

  std::vector<std::uint8_t> serialize() const;
  static SamplerBank deserialize(std::span<const std::uint8_t> bytes, const SketchConfig& config);
  void write(ByteWriter& out) const;
  static SamplerBank read(ByteReader& in, const SketchConfig& config);

  friend bool operator==(const SamplerBank& a, const SamplerBank& b) {
    return a.config_.hash() == b.config_.hash() && a.prf_ == b.prf_ && a.first_stage_ == b.first_stage_ &&
           a.stage_count_ == b.stage_count_ && a.store_ == b.store_;
  }

  // Encoding with an arbitrary sink; see incidence.cpp.
  template <class Sink>
  void encode(const Hyperedge& e, std::int64_t delta, std::size_t from_stage, Sink& sink) const;
  std::size_t slots_per_vertex() const { return stage_count_ * families_per_stage() * store_.shape().testers(); }
  IncidenceStore& store() { return store_; }
  const IncidenceStore& store() const { return store_; }

 private:
  friend class EncodedSketch;
  SamplerBank(const SketchConfig& config, std::size_t first_stage, std::size_t stage_count, bool allocate = true);
  std::size_t family_number(const FamilyIndex& f) const;

  SketchConfig config_;
  Prf prf_;
  std::vector<std::uint64_t> z_;
  std::size_t first_stage_ = 0;
  std::size_t stage_count_ = 0;
  IncidenceStore store_;
};

// Connectivity samplers over independently downsampled copies of the
// hypergraph: stage i keeps each edge with probability 2^-i (nested), and
// every vertex holds conn_copies() samplers per stage.
class ConnectivityBank {
 public:
  explicit ConnectivityBank(const SketchConfig& config) : ConnectivityBank(config, true) {}

  const SketchConfig& config() const { return config_; }
  const Prf& prf() const { return prf_; }
  std::size_t stages() const { return config_.conn_stages(); }
  std::size_t copies() const { return config_.conn_copies(); }
  std::size_t stage_depth(const EdgeId& id) const;
  PrfTag membership_tag(std::size_t stage, std::size_t copy) const;

  void update(const Hyperedge& e, std::int64_t delta);
  void merge(const ConnectivityBank& other);
  bool stage_is_zero(std::size_t stage) const;
  bool is_zero() const;

  L0Sampler component_sampler(std::size_t stage, std::size_t copy, std::span<const Vertex> c) const;

  std::vector<std::uint8_t> serialize() const;
  static ConnectivityBank deserialize(std::span<const std::uint8_t> bytes, const SketchConfig& config);
  void write(ByteWriter& out) const;
  static ConnectivityBank read(ByteReader& in, const SketchConfig& config);

  friend bool operator==(const ConnectivityBank& a, const ConnectivityBank& b) {
    return a.config_.hash() == b.config_.hash() && a.prf_ == b.prf_ && a.store_ == b.store_;
  }

  template <class Sink>
  void encode(const Hyperedge& e, std::int64_t delta, Sink& sink) const;
  std::size_t slots_per_vertex() const { return store_.families() * store_.shape().testers(); }
  IncidenceStore& store() { return store_; }
  const IncidenceStore& store() const { return store_; }

 private:
  friend class EncodedSketch;
  ConnectivityBank(const SketchConfig& config, bool allocate);

  SketchConfig config_;
  Prf prf_;
  std::vector<std::uint64_t> z_;
  IncidenceStore store_;
};

// Both banks together: the full output of the encoder.
class EncodedSketch {
 public:
  explicit EncodedSketch(const SketchConfig& config) : bank(config), conn(config) {}
  EncodedSketch(SamplerBank b, ConnectivityBank c) : bank(std::move(b)), conn(std::move(c)) {}

  void update(const Hyperedge& e, std::int64_t delta);
  void merge(const EncodedSketch& other);

  // Per-vertex fragments of the sketch of `edges`, built without allocating
  // dense banks. Only vertices with nonzero testers appear.
  static std::vector<VertexFragment> encode_fragments(const SketchConfig& config, const EdgeMultiset& edges);
  std::vector<VertexFragment> fragments() const;
  void add_fragment(const VertexFragment& fragment);

  std::vector<std::uint8_t> serialize() const;
  static EncodedSketch deserialize(std::span<const std::uint8_t> bytes, const SketchConfig& config);

  friend bool operator==(const EncodedSketch& a, const EncodedSketch& b) {
    return a.bank == b.bank && a.conn == b.conn;
  }

  SamplerBank bank;
  ConnectivityBank conn;
};

// Configuration recorded in a serialized sketch header. The seed is not
// stored, so it comes back zeroed.
SketchConfig sketch_file_config(std::span<const std::uint8_t> bytes);

}  // namespace hypersketch
