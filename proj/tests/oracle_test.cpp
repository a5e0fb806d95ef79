#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hypersketch/dsu.hpp"
#include "hypersketch/errors.hpp"
#include "hypersketch/oracle.hpp"

using namespace hypersketch;
using namespace hypersketch::oracle;

namespace {

std::uint64_t bell(std::size_t n) {
  std::vector<std::vector<std::uint64_t>> t(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  t[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    t[i][0] = t[i - 1][i - 1];
    for (std::size_t j = 1; j <= i; ++j) t[i][j] = t[i][j - 1] + t[i - 1][j - 1];
  }
  return t[n][0];
}

}  // namespace

TEST(MinCut, Examples) {
  auto t = min_normalized_kcut(fixtures::triangle());
  EXPECT_EQ(t.phi, Rational(3, 2));
  EXPECT_EQ(t.witness, Partition::singletons(3));

  Hypergraph single(3);
  single.add_edge({0, 1, 2});
  auto s = min_normalized_kcut(single);
  EXPECT_EQ(s.phi, Rational(1, 2));
  EXPECT_EQ(s.witness, Partition::singletons(3));

  auto k4 = min_normalized_kcut(fixtures::clique(4));
  EXPECT_EQ(k4.phi, Rational(2));
  EXPECT_EQ(k4.witness, Partition::singletons(4));
}

TEST(MinCut, TieBreakPrefersFewerBlocksThenLexicographic) {
  // Path 0-1-2: the 2-cuts {0}{1,2} and {0,1}{2} and the 3-cut all give 1.
  Hypergraph path(3);
  path.add_edge({0, 1});
  path.add_edge({1, 2});
  auto c = min_normalized_kcut(path);
  EXPECT_EQ(c.phi, Rational(1));
  EXPECT_EQ(c.witness, Partition({{0, 1}, {2}}));
}

TEST(MinCut, DisconnectedIsZeroAndCapIsEnforced) {
  Hypergraph h(4);
  h.add_edge({0, 1});
  h.add_edge({2, 3});
  EXPECT_EQ(min_normalized_kcut(h).phi, Rational(0));
  EXPECT_THROW(min_normalized_kcut(Hypergraph(13)), CapExceeded);
  EXPECT_THROW(min_normalized_kcut(Hypergraph(5), Limits{4, 20}), CapExceeded);
}

TEST(Strength, RecursiveExamples) {
  auto t = strength_recursive(fixtures::triangle());
  for (auto& [e, s] : t.edge_strength) EXPECT_EQ(s, Rational(3, 2)) << e.to_string();

  Hypergraph path(3);
  path.add_edge({0, 1});
  path.add_edge({1, 2});
  auto p = strength_recursive(path);
  EXPECT_EQ(p.strength({0, 1}), Rational(1));
  EXPECT_EQ(p.strength({1, 2}), Rational(1));

  auto j = strength_recursive(fixtures::joined_triangles());
  EXPECT_EQ(j.strength({2, 3}), Rational(1));
  for (auto e : {Hyperedge{0, 1}, Hyperedge{1, 2}, Hyperedge{0, 2}, Hyperedge{3, 4}}) {
    EXPECT_EQ(j.strength(e), Rational(3, 2));
  }
  EXPECT_EQ(j.component_strength(std::vector<Vertex>{0, 1, 2}), Rational(3, 2));
}

TEST(Strength, CharacterizationExamples) {
  EXPECT_EQ(strength_characterization(fixtures::triangle(), {0, 1}), Rational(3, 2));
  auto j = fixtures::joined_triangles();
  EXPECT_EQ(strength_characterization(j, {2, 3}), Rational(1));
  EXPECT_EQ(strength_characterization(j, {4, 5}), Rational(3, 2));
  EXPECT_THROW(strength_characterization(j, {0, 5}), InputError);
}

TEST(Strength, DefinitionsAgreeOnRandomHypergraphs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 6;
    auto h = fixtures::random_hypergraph(rng, n, 5, 1 + rng() % 12, 3);
    auto rec = strength_recursive(h);
    for (const auto& [e, w] : h.edges()) {
      ASSERT_EQ(rec.strength(e), strength_characterization(h, e)) << e.to_string();
    }
    EXPECT_LE(rec.distinct_values().size(), n);
  }
}

TEST(Strength, MonotoneUnderEdgeAddition) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 3 + rng() % 5;
    auto h = fixtures::random_hypergraph(rng, n, 4, 8);
    auto before = strength_recursive(h);
    Hypergraph bigger = h;
    bigger.add_edge(random_edge(rng, n, 4));
    auto after = strength_recursive(bigger);
    for (const auto& [e, s] : before.edge_strength) EXPECT_GE(after.strength(e), s) << e.to_string();
  }
}

TEST(Strength, RemovalLeavesOnlyStrongEdges) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 3 + rng() % 5;
    auto h = fixtures::random_hypergraph(rng, n, 4, 10, 2);
    auto s = strength_recursive(h);
    for (const Rational& lambda : s.distinct_values()) {
      auto weak = edges_below_strength(h, s, lambda - Rational(1, 1000));
      Hypergraph rest(n);
      for (const auto& [e, w] : h.edges()) {
        if (!weak.count(e)) rest.add_edge(e, w);
      }
      if (rest.distinct_edges() == 0) continue;
      auto rs = strength_recursive(rest);
      for (const auto& [e, v] : rs.edge_strength) EXPECT_GE(v, lambda) << e.to_string();
    }
  }
}

TEST(Strength, UnionOfStrongComponentsThroughStrongEdge) {
  // Two K4s (strength 2) joined by three parallel copies of a bridge.
  Hypergraph h(8);
  for (Vertex base : {0u, 4u}) {
    for (Vertex a = 0; a < 4; ++a) {
      for (Vertex b = a + 1; b < 4; ++b) h.add_edge({base + a, base + b});
    }
  }
  h.add_edge({3, 4}, 3);
  auto s = strength_recursive(h);
  EXPECT_GE(s.strength({3, 4}), Rational(2));
  auto all = std::vector<Vertex>{0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_GE(min_normalized_kcut(h.induced(all)).phi, Rational(2));
}

TEST(Strength, CountBound) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 80; ++trial) {
    std::size_t n = 2 + rng() % 6;
    auto h = fixtures::random_hypergraph(rng, n, 5, 1 + rng() % 20);
    auto s = strength_recursive(h);
    for (Rational w : {Rational(1, 2), Rational(1), Rational(2), Rational(4)}) {
      Weight total = 0;
      for (auto& [e, m] : edges_below_strength(h, s, w)) total += m;
      EXPECT_LE(Rational(total), Rational(static_cast<std::int64_t>(n - 1)) * w);
    }
  }
}

TEST(EdgesBelowStrength, Examples) {
  auto t = fixtures::triangle();
  EXPECT_TRUE(edges_below_strength(t, Rational(1)).empty());
  EXPECT_EQ(edges_below_strength(t, Rational(3, 2)).size(), 3u);
  auto j = edges_below_strength(fixtures::joined_triangles(), Rational(1));
  EXPECT_EQ(j, (EdgeMultiset{{Hyperedge{2, 3}, 1}}));
}

TEST(CountSmallCuts, Examples) {
  auto t = fixtures::triangle();
  EXPECT_EQ(count_small_kcuts(t, Rational(1)), 0u);
  EXPECT_EQ(count_small_kcuts(t, Rational(2)), 4u);
  auto j = fixtures::joined_triangles();
  EXPECT_EQ(count_small_kcuts(j, Rational(100)), bell(6) - 1);
}

TEST(CountSmallCuts, PolynomialBound) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 6;
    auto h = fixtures::random_hypergraph(rng, n, 4, 1 + rng() % 15);
    if (min_normalized_kcut(h).phi == Rational(0)) continue;
    for (int t : {1, 2, 3}) {
      EXPECT_LE(count_small_kcuts(h, Rational(t)), std::pow(static_cast<double>(n), 2.0 * t));
    }
  }
}

TEST(Contraction, LowStrengthEdgesUnchanged) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 3 + rng() % 5;
    auto h = fixtures::random_hypergraph(rng, n, 4, 4 + rng() % 12, 2);
    auto s = strength_recursive(h);
    for (const Rational& kappa : s.distinct_values()) {
      auto comps = fixtures::strong_components(h, s, kappa);
      // Keep a random subfamily, pad with singletons.
      std::vector<std::vector<Vertex>> blocks;
      std::vector<bool> covered(n, false);
      for (auto& c : comps) {
        if (rng() % 3 == 0) continue;
        for (Vertex v : c) covered[v] = true;
        blocks.push_back(c);
      }
      for (Vertex v = 0; v < n; ++v) {
        if (!covered[v]) blocks.push_back({v});
      }
      Partition p(blocks);
      auto labels = p.labels(n);
      auto hc = contract(h, p);
      auto sc = hc.distinct_edges() ? strength_recursive(hc) : StrengthAssignment{};
      for (const auto& [e, w] : h.edges()) {
        bool weak = s.strength(e) <= kappa;
        auto img = contract_edge(e, labels);
        bool weak_after = img && sc.strength(*img) <= kappa;
        EXPECT_EQ(weak, weak_after) << e.to_string() << " kappa " << to_string(kappa);
      }
    }
  }
}

TEST(Verify, IdentityAndExactReweighting) {
  auto h = fixtures::joined_triangles();
  auto r = verify_sparsifier(h, h, Rational(0), true);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.worst_ratio, Rational(1));
  EXPECT_EQ(r.cuts_checked, bell(6) - 1);

  // Every edge twice, against one copy of each at weight 2.
  Hypergraph doubled(6), reweighted(6);
  for (auto& [e, w] : h.edges()) {
    doubled.add_edge(e);
    doubled.add_edge(e);
    reweighted.add_edge(e, 2);
  }
  EXPECT_TRUE(verify_sparsifier(doubled, reweighted, Rational(0), true).ok);
}

TEST(Verify, DetectsDeviation) {
  auto h = fixtures::joined_triangles();
  Hypergraph hs = h;
  hs.add_edge({2, 3});
  auto r = verify_sparsifier(h, hs, Rational(1, 2), false);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.worst_ratio, Rational(2));
  EXPECT_EQ(r.cuts_checked, 31u);
  EXPECT_TRUE(verify_sparsifier(h, hs, Rational(1), false).ok);
  Hypergraph split(6);
  split.add_edge({0, 1});
  split.add_edge({2, 3});
  Hypergraph h2(6);
  h2.add_edge({0, 1});
  EXPECT_TRUE(verify_sparsifier(h2, split, Rational(1, 2), false).unbounded);
}
