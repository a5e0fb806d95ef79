#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "hypersketch/dsu.hpp"
#include "hypersketch/errors.hpp"
#include "hypersketch/oracle.hpp"
#include "hypersketch/sparsify.hpp"

using namespace hypersketch;

namespace {

EncodedSketch sketch_of(const SketchConfig& cfg, const EdgeMultiset& edges) {
  EncodedSketch s(cfg);
  for (auto& [e, w] : edges) s.update(e, w);
  return s;
}

// True connected components of the edges admitted at a connectivity stage,
// with the blocks of `coarser` glued together first.
Partition true_components(const ConnectivityBank& conn, const EdgeMultiset& edges, std::size_t stage,
                          const Partition* finer_stage) {
  std::size_t n = conn.config().n;
  DisjointSets dsu(n);
  if (finer_stage) {
    for (const auto& b : finer_stage->blocks()) {
      for (Vertex v : b) dsu.unite(b[0], v);
    }
  }
  for (const auto& [e, w] : edges) {
    if (conn.stage_depth(canonical_id(e, n)) < stage) continue;
    for (Vertex v : e.vertices()) dsu.unite(e.vertices()[0], v);
  }
  std::vector<std::size_t> labels(n);
  for (Vertex v = 0; v < n; ++v) labels[v] = dsu.find(v);
  return Partition::from_labels(labels);
}

}  // namespace

TEST(ErrorParameter, Examples) {
  EXPECT_EQ(set_error_parameter(Rational(1, 2), 1), Rational(1, 2));
  EXPECT_EQ(set_error_parameter(Rational(1, 2), 8), Rational(1, 32));
  Rational last(0);
  for (int k = 1; k < 100; ++k) {
    Rational e = set_error_parameter(Rational(k, 100), 8);
    EXPECT_GT(e, last);
    last = e;
  }
  EXPECT_THROW(set_error_parameter(Rational(0), 8), InputError);
  EXPECT_THROW(set_error_parameter(Rational(1), 8), InputError);
}

TEST(StrengthDecomposition, EmptyHypergraph) {
  auto cfg = fixtures::small_config(5, 1);
  SamplerBank bank(cfg);
  auto r = strength_decomposition(bank, 0, 1.0, Partition::singletons(5));
  EXPECT_TRUE(r.crossing.empty());
  EXPECT_EQ(r.components.size(), 5u);
  EXPECT_TRUE(r.complete);
}

TEST(StrengthDecomposition, StarKeepsSingletons) {
  auto cfg = fixtures::small_config(7, 2);
  EdgeMultiset star;
  for (Vertex v = 1; v < 7; ++v) star.emplace(Hyperedge{0, v}, 1);
  auto s = sketch_of(cfg, star);
  auto r = strength_decomposition(s.bank, 0, 1.0, Partition::singletons(7));
  EXPECT_EQ(r.crossing, star);
  EXPECT_EQ(r.components.size(), 7u);
}

TEST(StrengthDecomposition, DenseCliqueMerges) {
  auto cfg = fixtures::small_config(6, 3);
  // K6 with weight 4 has strength 12, far above 2 * phi * log2(6) for phi = 0.5.
  auto h = fixtures::clique(6, 4);
  auto s = sketch_of(cfg, h.edges());
  auto r = strength_decomposition(s.bank, 0, 0.5, Partition::singletons(6));
  ASSERT_EQ(r.components.size(), 1u);
  EXPECT_EQ(r.components[0].size(), 6u);
}

TEST(StrengthDecomposition, ComponentsAreStrongAndCrossingIsComplete) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 8; ++trial) {
    std::size_t n = 5 + rng() % 4;
    auto cfg = fixtures::small_config(n, 300 + trial);
    auto h = fixtures::random_hypergraph(rng, n, 4, 3 * n, 3);
    auto s = sketch_of(cfg, h.edges());
    const double phi = 0.5;
    auto r = strength_decomposition(s.bank, 0, phi, Partition::singletons(n));
    ASSERT_TRUE(r.complete);
    Partition t(r.components);
    auto labels = t.labels(n);
    for (const auto& block : r.components) {
      if (block.size() < 2) continue;
      auto phi_block = oracle::min_normalized_kcut(h.induced(block)).phi;
      EXPECT_GE(to_double(phi_block), phi * cfg.log_n()) << "trial " << trial;
    }
    for (const auto& [e, w] : h.edges()) {
      if (contract_edge(e, labels)) EXPECT_EQ(r.crossing.count(e), 1u) << e.to_string();
    }
    for (const auto& [e, w] : r.crossing) EXPECT_EQ(h.weight(e), w);
  }
}

TEST(ConditionalRecovery, Examples) {
  auto cfg = fixtures::small_config(3, 5);
  Hypergraph single(3);
  single.add_edge({0, 1, 2});
  auto s = sketch_of(cfg, single.edges());
  EXPECT_EQ(conditional_edge_recovery(s.bank, 0, 1.0, 1.0, Partition::singletons(3)), single.edges());

  auto cfg4 = fixtures::small_config(4, 6);
  auto k4 = sketch_of(cfg4, fixtures::clique(4).edges());
  EXPECT_TRUE(conditional_edge_recovery(k4.bank, 0, 1.0, 1.0, Partition::singletons(4)).empty());

  auto cfg6 = fixtures::small_config(6, 7);
  auto j = sketch_of(cfg6, fixtures::joined_triangles().edges());
  EXPECT_EQ(conditional_edge_recovery(j.bank, 0, 1.0, 1.0, Partition::singletons(6)),
            (EdgeMultiset{{Hyperedge{2, 3}, 1}}));
}

TEST(ConditionalRecovery, RejectsLargeKappa) {
  auto cfg = fixtures::small_config(4, 8);
  SamplerBank bank(cfg);
  EXPECT_THROW(conditional_edge_recovery(bank, 0, 1.0, 2.0, Partition::singletons(4)), InputError);
}

TEST(ConditionalRecovery, MatchesOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 8; ++trial) {
    std::size_t n = 5 + rng() % 3;
    auto cfg = fixtures::small_config(n, 400 + trial);
    auto h = fixtures::random_hypergraph(rng, n, 4, 2 * n, 2);
    auto s = sketch_of(cfg, h.edges());
    double kappa = 1.0 + static_cast<double>(rng() % 3);
    double phi = kappa;
    auto got = conditional_edge_recovery(s.bank, 0, phi, kappa, Partition::singletons(n));
    auto want = oracle::edges_below_strength(h, Rational(static_cast<std::int64_t>(kappa)));
    EXPECT_EQ(got, want) << "trial " << trial;
  }
}

TEST(StrongComponents, MatchTrueConnectivity) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 4; ++trial) {
    auto cfg = fixtures::small_config(8, 500 + trial);
    EdgeMultiset edges;
    auto k4 = fixtures::clique(4);
    for (auto& [e, w] : k4.edges()) {
      edges[e] += 1;
      std::vector<Vertex> shifted;
      for (Vertex v : e.vertices()) shifted.push_back(v + 4);
      edges[Hyperedge(shifted)] += 1;
    }
    edges[Hyperedge{3, 4}] += 1;
    ConnectivityBank conn(cfg);
    for (auto& [e, w] : edges) conn.update(e, w);
    auto schedule = recover_strong_components(conn);
    ASSERT_EQ(schedule.partitions.size(), conn.stages());
    EXPECT_EQ(schedule.partitions[0], Partition::whole(8));
    for (std::size_t i = conn.stages(); i-- > 0;) {
      const Partition* finer = i + 1 < conn.stages() ? &schedule.partitions[i + 1] : nullptr;
      EXPECT_EQ(schedule.partitions[i], true_components(conn, edges, i, finer)) << "stage " << i;
      EXPECT_TRUE(schedule.partitions[i].covers(8));
      EXPECT_FALSE(schedule.incomplete[i]);
    }
  }
}

TEST(StrongComponents, EmptyBankGivesSingletons) {
  auto cfg = fixtures::small_config(5, 11);
  ConnectivityBank conn(cfg);
  auto schedule = recover_strong_components(conn);
  for (auto& p : schedule.partitions) EXPECT_EQ(p, Partition::singletons(5));
}

TEST(Sparsify, SmallInputIsRecoveredExactly) {
  auto cfg = fixtures::small_config(6, 12);
  cfg.rep_cap = 8;
  auto h = fixtures::joined_triangles();
  auto s = sketch_of(cfg, h.edges());
  auto out = sparsify(s.bank, s.conn, cfg);
  EXPECT_EQ(out.as_hypergraph(), h);
  for (auto& e : out.edges) EXPECT_EQ(e.stage, 0u);
  EXPECT_EQ(out.eps_star, cfg.eps_star());
}

TEST(Sparsify, DuplicatedMultigraphWithinEps) {
  auto cfg = fixtures::small_config(5, 13);
  cfg.rep_cap = 8;
  EdgeMultiset edges;
  auto k5 = fixtures::clique(5);
  for (auto& [e, w] : k5.edges()) edges[e] = Weight{1} << cfg.stages();
  edges[Hyperedge{0, 1, 2}] = 3;
  auto s = sketch_of(cfg, edges);
  auto out = sparsify(s.bank, s.conn, cfg);
  auto report = oracle::verify_sparsifier(Hypergraph(5, edges), out.as_hypergraph(), cfg.eps, true);
  EXPECT_TRUE(report.ok) << to_string(report.worst_ratio);
}

TEST(Sparsify, OutputInvariants) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    auto cfg = fixtures::small_config(7, 600 + trial);
    auto h = fixtures::random_hypergraph(rng, 7, 4, 30, 3);
    auto s = sketch_of(cfg, h.edges());
    auto out = sparsify(s.bank, s.conn, cfg);
    std::set<Hyperedge> seen;
    for (const auto& e : out.edges) {
      EXPECT_TRUE(seen.insert(e.edge).second) << "duplicate " << e.edge.to_string();
      Weight w = h.weight(e.edge);
      ASSERT_GT(w, 0) << "edge not in input " << e.edge.to_string();
      EXPECT_EQ(e.weight % (Weight{1} << e.stage), 0);
      EXPECT_LE(e.weight >> e.stage, w);
    }
  }
}

TEST(Sparsify, RejectsMismatchedConfig) {
  auto cfg = fixtures::small_config(5, 15);
  auto other = cfg;
  other.C = 3.0;
  EncodedSketch s(cfg);
  EXPECT_THROW(sparsify(s.bank, s.conn, other), ConfigMismatch);
}

TEST(Sparsify, PreprocessOffsetOverride) {
  auto cfg = fixtures::small_config(6, 16);
  cfg.preprocess_offset = 0;
  cfg.rep_cap = 8;
  auto h = fixtures::joined_triangles();
  auto s = sketch_of(cfg, h.edges());
  auto out = sparsify(s.bank, s.conn, cfg);
  EXPECT_TRUE(out.warnings.empty());
  // The stage-0 base is the whole (connected) graph, so nothing crosses it.
  for (const auto& e : out.edges) {
    EXPECT_GT(e.stage, 0u);
    EXPECT_EQ(e.weight % (Weight{1} << e.stage), 0);
  }
  EXPECT_GT(preprocess_offset(fixtures::small_config(8, 1)), 0);
}

TEST(SparsifierOutput, TextRoundTrip) {
  SparsifierOutput out;
  out.n = 5;
  out.eps = Rational(1, 2);
  out.eps_star = Rational(1, 32);
  out.seed_hex = std::string(64, 'a');
  out.edges = {{Hyperedge{0, 1}, 1, 0}, {Hyperedge{1, 2, 4}, 4, 2}};
  out.warnings = {"something"};
  auto back = SparsifierOutput::parse(out.to_text());
  EXPECT_EQ(back.n, 5u);
  EXPECT_EQ(back.eps_star, Rational(1, 32));
  ASSERT_EQ(back.edges.size(), 2u);
  EXPECT_EQ(back.edges[1].edge, (Hyperedge{1, 2, 4}));
  EXPECT_EQ(back.edges[1].weight, 4);
  EXPECT_EQ(back.edges[1].stage, 2u);
  EXPECT_THROW(SparsifierOutput::parse("n 3\ne 0,5 1 0\n"), ParseError);
}
