#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hypersketch/config.hpp"
#include "hypersketch/dsu.hpp"
#include "hypersketch/generate.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/oracle.hpp"

namespace fixtures {

using namespace hypersketch;

inline Hypergraph triangle() {
  Hypergraph h(3);
  h.add_edge({0, 1});
  h.add_edge({1, 2});
  h.add_edge({0, 2});
  return h;
}

// Triangles {0,1,2} and {3,4,5} joined by the bridge {2,3}.
inline Hypergraph joined_triangles() {
  Hypergraph h(6);
  for (auto e : {Hyperedge{0, 1}, Hyperedge{1, 2}, Hyperedge{0, 2}, Hyperedge{3, 4}, Hyperedge{4, 5},
                 Hyperedge{3, 5}, Hyperedge{2, 3}}) {
    h.add_edge(e);
  }
  return h;
}

inline Hypergraph clique(std::size_t n, Weight w = 1) {
  Hypergraph h(n);
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) h.add_edge({a, b}, w);
  }
  return h;
}

// sqrt(n) cliques of size k plus k transversal edges, the j-th taking the
// j-th vertex of every clique.
inline Hypergraph cliques_with_transversals(std::size_t k) {
  Hypergraph h(k * k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        h.add_edge({static_cast<Vertex>(c * k + a), static_cast<Vertex>(c * k + b)});
      }
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Vertex> t;
    for (std::size_t c = 0; c < k; ++c) t.push_back(static_cast<Vertex>(c * k + j));
    h.add_edge(Hyperedge(t));
  }
  return h;
}

inline std::vector<std::vector<Vertex>> clique_blocks(std::size_t k) {
  std::vector<std::vector<Vertex>> blocks(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t a = 0; a < k; ++a) blocks[c].push_back(static_cast<Vertex>(c * k + a));
  }
  return blocks;
}

inline Hypergraph random_hypergraph(std::mt19937_64& rng, std::size_t n, std::size_t r, std::size_t m,
                                    Weight max_mult = 1) {
  return Hypergraph(n, random_multiset(rng, n, r, m, max_mult));
}

// Small sketch settings that keep banks in the low megabytes.
inline SketchConfig small_config(std::size_t n, std::uint64_t seed, std::size_t m_max = 64) {
  SketchConfig c;
  c.n = n;
  c.m_max = m_max;
  c.r_max = std::min<std::size_t>(4, n);
  c.rep_cap = 2;
  c.seed = seed_from_u64(seed);
  return c;
}

// Connected components of the edges of strength above kappa; vertices they
// do not touch are left out.
inline std::vector<std::vector<Vertex>> strong_components(const Hypergraph& h, const oracle::StrengthAssignment& s,
                                                          const Rational& kappa) {
  DisjointSets dsu(h.n());
  std::vector<bool> touched(h.n(), false);
  for (const auto& [e, w] : h.edges()) {
    if (s.strength(e) <= kappa) continue;
    for (Vertex v : e.vertices()) {
      dsu.unite(e.vertices()[0], v);
      touched[v] = true;
    }
  }
  std::map<std::size_t, std::vector<Vertex>> groups;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (touched[v]) groups[dsu.find(v)].push_back(v);
  }
  std::vector<std::vector<Vertex>> out;
  for (auto& [root, g] : groups) out.push_back(g);
  return out;
}

}  // namespace fixtures
