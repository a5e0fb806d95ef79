#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "hypersketch/errors.hpp"
#include "hypersketch/oracle.hpp"
#include "hypersketch/prf.hpp"
#include "hypersketch/text_format.hpp"

using namespace hypersketch;

TEST(Hyperedge, SortsAndRejectsBadInput) {
  Hyperedge e{3, 1, 2};
  EXPECT_EQ(e.vertices(), (std::vector<Vertex>{1, 2, 3}));
  EXPECT_THROW(Hyperedge({1}), InputError);
  EXPECT_THROW(Hyperedge({1, 1}), InputError);
  EXPECT_EQ(e.to_string(), "1,2,3");
}

TEST(CanonicalId, Examples) {
  EXPECT_EQ(canonical_id({0, 1}, 4).to_u64(), 3u);
  EXPECT_EQ(canonical_id({1, 3}, 4).to_u64(), 10u);
  EXPECT_EQ(canonical_id({0, 1, 2}, 3).to_u64(), 7u);
  EXPECT_THROW(canonical_id({0, 4}, 4), InputError);
}

TEST(CanonicalId, WideIdsRoundTrip) {
  Hyperedge e{0, 63, 64, 200};
  EdgeId id = canonical_id(e, 256);
  EXPECT_FALSE(id.to_u64().has_value());
  EXPECT_EQ(id.popcount(), 4u);
  EXPECT_EQ(Hyperedge::from_id(id), e);
}

TEST(CanonicalId, InjectiveExhaustiveN10) {
  const std::size_t n = 10;
  std::set<std::uint64_t> seen;
  for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::vector<Vertex> vs;
    for (Vertex v = 0; v < n; ++v) {
      if (mask >> v & 1) vs.push_back(v);
    }
    auto id = canonical_id(Hyperedge(vs), n).to_u64();
    ASSERT_TRUE(id.has_value());
    EXPECT_EQ(*id, mask);
    EXPECT_TRUE(seen.insert(*id).second);
  }
}

TEST(CutValue, Examples) {
  auto t = fixtures::triangle();
  auto c = cut_value(t, Partition({{0}, {1, 2}}));
  EXPECT_EQ(c.crossing, 2);
  EXPECT_EQ(c.normalized, Rational(2));
  c = cut_value(t, Partition::singletons(3));
  EXPECT_EQ(c.crossing, 3);
  EXPECT_EQ(c.normalized, Rational(3, 2));
  Hypergraph empty(4);
  c = cut_value(empty, Partition({{0, 1}, {2, 3}}));
  EXPECT_EQ(c.crossing, 0);
  EXPECT_EQ(c.normalized, Rational(0));
}

TEST(CutValue, RejectsBadPartitions) {
  auto t = fixtures::triangle();
  EXPECT_THROW(Partition({{0, 1}, {1, 2}}), InputError);
  EXPECT_THROW(cut_value(t, Partition({{0}, {1}})), InputError);
  EXPECT_THROW(cut_value(t, Partition::whole(3)), InputError);
}

TEST(CutValue, LinearInWeights) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 3 + rng() % 5;
    auto a = fixtures::random_hypergraph(rng, n, 4, 8, 3);
    auto b = fixtures::random_hypergraph(rng, n, 4, 8, 3);
    Hypergraph ab = a;
    for (auto& [e, w] : b.edges()) ab.add_edge(e, w);
    oracle::for_each_partition(n, [&](std::span<const std::size_t> labels, std::size_t k) {
      if (k < 2) return;
      auto p = Partition::from_labels(labels);
      EXPECT_EQ(cut_value(ab, p).crossing, cut_value(a, p).crossing + cut_value(b, p).crossing);
    });
  }
}

TEST(Contract, Examples) {
  auto t = fixtures::triangle();
  auto c = contract(t, Partition({{0, 1}, {2}}));
  EXPECT_EQ(c.n(), 2u);
  EXPECT_EQ(c.distinct_edges(), 1u);
  EXPECT_EQ(c.weight({0, 1}), 2);

  Hypergraph single(3);
  single.add_edge({0, 1, 2});
  EXPECT_EQ(contract(single, Partition::singletons(3)), single);

  EXPECT_EQ(contract(fixtures::joined_triangles(), Partition::whole(6)).total_weight(), 0);
}

// Cuts of H/P over partitions of the blocks equal the matching cuts of H.
TEST(Contract, PreservesBlockRespectingCutsExhaustive) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 3 + rng() % 5;
    auto h = fixtures::random_hypergraph(rng, n, 4, 10, 2);
    std::vector<std::size_t> labels(n);
    std::size_t blocks = 2 + rng() % (n - 1);
    for (std::size_t v = 0; v < n; ++v) labels[v] = v < blocks ? v : rng() % blocks;
    auto p = Partition::from_labels(labels);
    auto hc = contract(h, p);
    oracle::for_each_partition(p.size(), [&](std::span<const std::size_t> outer, std::size_t k) {
      if (k < 2) return;
      std::vector<std::size_t> lifted(n);
      auto inner = p.labels(n);
      for (std::size_t v = 0; v < n; ++v) lifted[v] = outer[inner[v]];
      auto coarse = cut_value(hc, Partition::from_labels(outer));
      auto fine = cut_value(h, Partition::from_labels(lifted));
      EXPECT_EQ(coarse.crossing, fine.crossing);
      EXPECT_EQ(coarse.normalized, fine.normalized);
    });
  }
}

namespace {
bool prf_bit(const Prf& prf, const PrfTag& tag, std::uint64_t x, const Rational& rate) {
  return prf.bit(tag, std::span<const std::uint64_t>(&x, 1), rate);
}
}  // namespace

TEST(Prf, BitExamples) {
  Prf prf(seed_from_u64(1));
  PrfTag tag{Domain::kUser, {1, 2, 3, 4}};
  EXPECT_TRUE(prf_bit(prf, tag, 99, Rational(1)));
  EXPECT_FALSE(prf_bit(prf, tag, 99, Rational(0)));
  bool first = prf_bit(prf, tag, 99, Rational(1, 2));
  for (int i = 0; i < 20; ++i) EXPECT_EQ(prf_bit(prf, tag, 99, Rational(1, 2)), first);
}

TEST(Prf, BitRateWithinThreeSigma) {
  Prf prf(seed_from_u64(2));
  PrfTag tag{Domain::kUser, {7, 0, 0, 0}};
  for (auto [num, den] : {std::pair{1, 2}, std::pair{1, 4}, std::pair{1, 10}}) {
    const int trials = 100000;
    const double rate = double(num) / den;
    int ones = 0;
    for (int i = 0; i < trials; ++i) ones += prf_bit(prf, tag, static_cast<std::uint64_t>(i), Rational(num, den));
    double sigma = std::sqrt(trials * rate * (1 - rate));
    EXPECT_LE(std::abs(ones - trials * rate), 3 * sigma) << "rate " << rate;
  }
}

TEST(Prf, TagsAreSeparated) {
  Prf prf(seed_from_u64(3));
  int same = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    same += prf.word({Domain::kUser, {1, 0, 0, 0}}, i) == prf.word({Domain::kUser, {2, 0, 0, 0}}, i);
  }
  EXPECT_EQ(same, 0);
  EXPECT_NE(Prf(seed_from_u64(3)).commitment(), Prf(seed_from_u64(4)).commitment());
}

TEST(TextFormat, HypergraphRoundTrip) {
  auto h = fixtures::joined_triangles();
  h.add_edge({0, 4, 5}, 3);
  auto text = format_hypergraph(h);
  auto back = parse_hypergraph(text);
  EXPECT_EQ(back.n(), h.n());
  EXPECT_EQ(back.r_max(), 3u);
  EXPECT_EQ(back.edges(), h.edges());
}

TEST(TextFormat, ErrorsCarryLineAndColumn) {
  try {
    parse_hypergraph("n 4 r 3\n+ 0,1\n+ 0,7\n", "g.txt");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 5u);
  }
  EXPECT_THROW(parse_hypergraph("n 4 r 2\n+ 0,1,2\n"), ParseError);
  EXPECT_THROW(parse_hypergraph("+ 0,1\n"), ParseError);
  EXPECT_THROW(parse_hypergraph("n 4 r 2\n+ 0,1 0\n"), ParseError);
  EXPECT_THROW(parse_hypergraph("n 4 r 2\n* 0,1\n"), ParseError);
}
