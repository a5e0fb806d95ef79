#include "hypersketch/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "hypersketch/errors.hpp"

namespace hypersketch {

Hyperedge::Hyperedge(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
    throw InputError("hyperedge has a repeated vertex: " + to_string());
  }
  if (vertices_.size() < 2) throw InputError("hyperedge needs at least two vertices");
}

Hyperedge Hyperedge::from_id(const EdgeId& id) {
  std::vector<Vertex> vs;
  auto limbs = id.limbs();
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    std::uint64_t word = limbs[i];
    while (word != 0) {
      int bit = std::countr_zero(word);
      vs.push_back(static_cast<Vertex>(64 * i + static_cast<std::size_t>(bit)));
      word &= word - 1;
    }
  }
  return Hyperedge(std::move(vs));
}

bool Hyperedge::contains(Vertex v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::string Hyperedge::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(vertices_[i]);
  }
  return out;
}

EdgeId canonical_id(const Hyperedge& e, std::size_t n) {
  EdgeId id;
  for (Vertex v : e.vertices()) {
    if (v >= n) {
      throw InputError("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n));
    }
    id.set(v);
  }
  return id;
}

std::uint64_t vertex_mask(const Hyperedge& e) {
  std::uint64_t mask = 0;
  for (Vertex v : e.vertices()) mask |= std::uint64_t{1} << v;
  return mask;
}

Hypergraph::Hypergraph(std::size_t n, const EdgeMultiset& edges) : n_(n) {
  for (const auto& [e, w] : edges) add_edge(e, w);
}

void Hypergraph::add_edge(const Hyperedge& e, Weight w) {
  if (w < 1) throw InputError("edge weight must be positive: " + e.to_string());
  if (e.max_vertex() >= n_) {
    throw InputError("edge " + e.to_string() + " out of range for n=" + std::to_string(n_));
  }
  if (r_max_ != 0 && e.arity() > r_max_) {
    throw InputError("edge " + e.to_string() + " exceeds arity bound " + std::to_string(r_max_));
  }
  edges_[e] += w;
}

Weight Hypergraph::weight(const Hyperedge& e) const {
  auto it = edges_.find(e);
  return it == edges_.end() ? 0 : it->second;
}

Weight Hypergraph::total_weight() const {
  Weight total = 0;
  for (const auto& [e, w] : edges_) total += w;
  return total;
}

Hypergraph Hypergraph::induced(std::span<const Vertex> subset) const {
  std::vector<bool> inside(n_, false);
  for (Vertex v : subset) {
    if (v < n_) inside[v] = true;
  }
  Hypergraph out(n_, r_max_);
  for (const auto& [e, w] : edges_) {
    if (std::all_of(e.vertices().begin(), e.vertices().end(), [&](Vertex v) { return inside[v]; })) {
      out.edges_.emplace(e, w);
    }
  }
  return out;
}

Partition::Partition(std::vector<std::vector<Vertex>> blocks) : blocks_(std::move(blocks)) {
  std::vector<Vertex> all;
  for (auto& b : blocks_) {
    if (b.empty()) throw InputError("partition has an empty block");
    std::sort(b.begin(), b.end());
    all.insert(all.end(), b.begin(), b.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw InputError("partition blocks overlap");
  }
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::vector<Vertex>> blocks;
  for (std::size_t v = 0; v < n; ++v) blocks.push_back({static_cast<Vertex>(v)});
  return Partition(std::move(blocks));
}

Partition Partition::whole(std::size_t n) {
  std::vector<Vertex> all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
  return Partition({all});
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  std::map<std::size_t, std::size_t> index;
  std::vector<std::vector<Vertex>> blocks;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == npos) continue;
    auto [it, fresh] = index.emplace(labels[v], blocks.size());
    if (fresh) blocks.emplace_back();
    blocks[it->second].push_back(static_cast<Vertex>(v));
  }
  return Partition(std::move(blocks));
}

std::size_t Partition::covered() const {
  std::size_t total = 0;
  for (const auto& b : blocks_) total += b.size();
  return total;
}

bool Partition::covers(std::size_t n) const {
  if (covered() != n) return false;
  for (const auto& b : blocks_) {
    if (b.back() >= n) return false;
  }
  return true;
}

std::vector<std::size_t> Partition::labels(std::size_t n) const {
  std::vector<std::size_t> out(n, npos);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (Vertex v : blocks_[i]) {
      if (v < n) out[v] = i;
    }
  }
  return out;
}

std::string Partition::to_string() const {
  std::string out;
  for (const auto& b : blocks_) {
    out += '{';
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(b[i]);
    }
    out += '}';
  }
  return out;
}

CutValue cut_value(const Hypergraph& h, const Partition& p) {
  if (!p.covers(h.n())) throw InputError("partition does not cover the vertex set");
  if (p.size() < 2) throw InputError("a cut needs at least two blocks");
  auto labels = p.labels(h.n());
  CutValue out;
  for (const auto& [e, w] : h.edges()) {
    std::size_t first = labels[e.vertices().front()];
    for (Vertex v : e.vertices()) {
      if (labels[v] != first) {
        out.crossing += w;
        break;
      }
    }
  }
  out.normalized = Rational(out.crossing, static_cast<std::int64_t>(p.size() - 1));
  return out;
}

std::optional<Hyperedge> contract_edge(const Hyperedge& e, std::span<const std::size_t> labels) {
  std::vector<Vertex> image;
  image.reserve(e.arity());
  for (Vertex v : e.vertices()) image.push_back(static_cast<Vertex>(labels[v]));
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  if (image.size() < 2) return std::nullopt;
  return Hyperedge(std::move(image));
}

Hypergraph contract(const Hypergraph& h, const Partition& p) {
  if (!p.covers(h.n())) throw InputError("contraction partition does not cover the vertex set");
  auto labels = p.labels(h.n());
  Hypergraph out(p.size());
  for (const auto& [e, w] : h.edges()) {
    if (auto image = contract_edge(e, labels)) out.add_edge(*image, w);
  }
  return out;
}

}  // namespace hypersketch
