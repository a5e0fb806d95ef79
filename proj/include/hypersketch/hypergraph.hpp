#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypersketch/edge_id.hpp"
#include "hypersketch/rational.hpp"

namespace hypersketch {

using Vertex = std::uint32_t;
using Weight = std::int64_t;

// A set of at least two vertices, stored sorted.
class Hyperedge {
 public:
  Hyperedge() = default;
  // Sorts the input; rejects duplicates and arity < 2.
  explicit Hyperedge(std::vector<Vertex> vertices);
  Hyperedge(std::initializer_list<Vertex> vertices) : Hyperedge(std::vector<Vertex>(vertices)) {}

  // Inverse of canonical_id.
  static Hyperedge from_id(const EdgeId& id);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::size_t arity() const { return vertices_.size(); }
  Vertex max_vertex() const { return vertices_.back(); }
  bool contains(Vertex v) const;
  std::string to_string() const;

  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
  friend auto operator<=>(const Hyperedge&, const Hyperedge&) = default;

 private:
  std::vector<Vertex> vertices_;
};

// Characteristic bitmask of e. Throws InputError if a vertex is >= n.
EdgeId canonical_id(const Hyperedge& e, std::size_t n);

// Bitmask for n <= 64.
std::uint64_t vertex_mask(const Hyperedge& e);

using EdgeMultiset = std::map<Hyperedge, Weight>;

class Hypergraph {
 public:
  Hypergraph() = default;
  // r_max == 0 means no arity bound.
  explicit Hypergraph(std::size_t n, std::size_t r_max = 0) : n_(n), r_max_(r_max) {}
  Hypergraph(std::size_t n, const EdgeMultiset& edges);

  std::size_t n() const { return n_; }
  std::size_t r_max() const { return r_max_; }

  // Adds w copies of e. w must be >= 1.
  void add_edge(const Hyperedge& e, Weight w = 1);
  Weight weight(const Hyperedge& e) const;
  const EdgeMultiset& edges() const { return edges_; }
  std::size_t distinct_edges() const { return edges_.size(); }
  Weight total_weight() const;

  // Same vertex labels, only edges fully inside `subset`.
  Hypergraph induced(std::span<const Vertex> subset) const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t r_max_ = 0;
  EdgeMultiset edges_;
};

// Disjoint nonempty vertex blocks. Block order is kept as given; each block
// is sorted.
class Partition {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Partition() = default;
  explicit Partition(std::vector<std::vector<Vertex>> blocks);
  static Partition singletons(std::size_t n);
  static Partition whole(std::size_t n);
  // Blocks ordered by first appearance of each label.
  static Partition from_labels(std::span<const std::size_t> labels);

  std::size_t size() const { return blocks_.size(); }
  const std::vector<Vertex>& block(std::size_t i) const { return blocks_[i]; }
  const std::vector<std::vector<Vertex>>& blocks() const { return blocks_; }
  std::size_t covered() const;
  bool covers(std::size_t n) const;
  // Block index per vertex in [0, n); npos where uncovered.
  std::vector<std::size_t> labels(std::size_t n) const;
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::vector<Vertex>> blocks_;
};

struct CutValue {
  Weight crossing = 0;
  Rational normalized{0};
};

// P must cover [0, n) with at least two blocks.
CutValue cut_value(const Hypergraph& h, const Partition& p);

// Image of e under the block labelling; nullopt if e falls in one block.
std::optional<Hyperedge> contract_edge(const Hyperedge& e, std::span<const std::size_t> labels);

// Vertices of the result are block indices of P.
Hypergraph contract(const Hypergraph& h, const Partition& p);

}  // namespace hypersketch
