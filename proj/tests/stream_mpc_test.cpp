#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "hypersketch/errors.hpp"
#include "hypersketch/mpc.hpp"
#include "hypersketch/oracle.hpp"
#include "hypersketch/selftest.hpp"
#include "hypersketch/stream.hpp"
#include "hypersketch/text_format.hpp"

using namespace hypersketch;

namespace {

EncodedSketch direct(const SketchConfig& cfg, const EdgeMultiset& edges) {
  EncodedSketch s(cfg);
  for (auto& [e, w] : edges) s.update(e, w);
  return s;
}

}  // namespace

TEST(Config, JsonRoundTripAndValidation) {
  auto cfg = fixtures::small_config(9, 1);
  cfg.eps = Rational(1, 3);
  cfg.preprocess_offset = 4;
  auto back = SketchConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.canonical(), cfg.canonical());
  EXPECT_EQ(back.seed, cfg.seed);
  EXPECT_EQ(back.hash(), cfg.hash());
  EXPECT_THROW(SketchConfig::from_json("{\"bogus\": 1}"), InputError);
  EXPECT_THROW(SketchConfig::from_json("{"), InputError);
  SketchConfig bad = cfg;
  bad.r_max = 1;
  EXPECT_THROW(bad.validate(), InputError);
  bad = cfg;
  bad.n = 1;
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Config, StrictnessDoesNotChangeTheSketch) {
  auto a = fixtures::small_config(5, 2);
  auto b = a;
  b.strict = false;
  EXPECT_EQ(a.hash(), b.hash());
  auto c = a;
  c.c_conn = 5;
  EXPECT_NE(a.hash(), c.hash());
}

TEST(Stream, ParseAndFormat) {
  auto s = parse_stream("n 5 r 3\n+ 0,1\n- 0,1\n+ 2,3,4 2  # twice\n");
  EXPECT_EQ(s.n, 5u);
  ASSERT_EQ(s.updates.size(), 4u);
  EXPECT_EQ(s.updates[1].op, StreamOp::kDelete);
  EXPECT_EQ(s.updates[3].edge, (Hyperedge{2, 3, 4}));
  EXPECT_EQ(parse_stream(format_stream(s)).updates.size(), 4u);
  try {
    parse_stream("n 5 r 2\n+ 0,1\n+ 0,1,2\n", "s.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_stream("n 5 r 2\n? 0,1\n"), ParseError);
}

TEST(Stream, InsertDeleteIsEmpty) {
  auto cfg = fixtures::small_config(5, 3);
  std::vector<StreamUpdate> ups{{StreamOp::kInsert, {0, 1, 2}}, {StreamOp::kDelete, {0, 1, 2}}};
  EXPECT_EQ(stream_encode(ups, cfg).serialize(), EncodedSketch(cfg).serialize());
}

TEST(Stream, StrictAndLenientDeletion) {
  auto cfg = fixtures::small_config(5, 4);
  std::vector<StreamUpdate> ups{{StreamOp::kDelete, {0, 1}}, {StreamOp::kInsert, {0, 1}}};
  EXPECT_THROW(stream_encode(ups, cfg), InputError);
  cfg.strict = false;
  EXPECT_TRUE(stream_encode(ups, cfg).bank.is_zero());
}

TEST(Stream, BoundsAreEnforced) {
  auto cfg = fixtures::small_config(5, 5);
  cfg.m_max = 2;
  std::vector<StreamUpdate> ups{{StreamOp::kInsert, {0, 1}}, {StreamOp::kInsert, {1, 2}}, {StreamOp::kInsert, {2, 3}}};
  EXPECT_THROW(stream_encode(ups, cfg), InputError);
  ups.push_back({StreamOp::kDelete, {2, 3}});
  EXPECT_NO_THROW(stream_encode(ups, cfg));
  cfg.r_max = 2;
  EXPECT_THROW(stream_encode(std::vector<StreamUpdate>{{StreamOp::kInsert, {0, 1, 2}}}, cfg), InputError);
  EXPECT_THROW(stream_encode(std::vector<StreamUpdate>{{StreamOp::kInsert, {0, 7}}}, cfg), InputError);
}

TEST(Stream, OrderInvariance) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    auto cfg = fixtures::small_config(6, 10 + trial);
    auto target = random_multiset(rng, 6, 4, 12, 2);
    auto reference = direct(cfg, target).serialize();
    for (int perm = 0; perm < 3; ++perm) {
      auto ups = random_stream(rng, target, 6, 4, 8);
      EXPECT_EQ(final_multiset(ups, cfg), target);
      EXPECT_EQ(stream_encode(ups, cfg).serialize(), reference);
    }
  }
}

TEST(Stream, LongDynamicStreamDecodes) {
  std::mt19937_64 rng(7);
  auto cfg = fixtures::small_config(8, 20, 256);
  cfg.rep_cap = 8;
  auto target = random_multiset(rng, 8, 4, 40);
  auto ups = random_stream(rng, target, 8, 4, 5000);
  ASSERT_GE(ups.size(), 10000u);
  auto sketch = stream_encode(ups, cfg);
  auto out = sparsify(sketch.bank, sketch.conn, cfg);
  auto report = oracle::verify_sparsifier(Hypergraph(8, target), out.as_hypergraph(), cfg.eps, true);
  EXPECT_TRUE(report.ok) << to_string(report.worst_ratio);
}

TEST(Mpc, RoundBound) {
  EXPECT_EQ(mpc_round_bound(4, 4), 2u);
  EXPECT_EQ(mpc_round_bound(4, 16), 2u);
  EXPECT_EQ(mpc_round_bound(4, 64), 3u);
  EXPECT_EQ(mpc_round_bound(16, 4096), 3u);
  EXPECT_EQ(mpc_round_bound(8, 9), 2u);
  EXPECT_EQ(mpc_round_bound(8, 65), 3u);
}

TEST(Mpc, SingleShardMatchesDirect) {
  std::mt19937_64 rng(8);
  auto cfg = fixtures::small_config(6, 30);
  auto edges = random_multiset(rng, 6, 4, 12, 2);
  auto r = mpc_simulate({edges}, cfg, std::size_t{1} << 30);
  EXPECT_EQ(r.coordinator.serialize(), direct(cfg, edges).serialize());
  EXPECT_EQ(r.rounds, 2u);
  ASSERT_TRUE(r.sparsifier.has_value());
  auto d = direct(cfg, edges);
  EXPECT_EQ(r.sparsifier->to_text(), sparsify(d.bank, d.conn, cfg).to_text());
}

TEST(Mpc, FewShardsTakeTwoRounds) {
  std::mt19937_64 rng(9);
  auto cfg = fixtures::small_config(8, 31);
  auto edges = random_multiset(rng, 8, 4, 20);
  auto r = mpc_simulate(random_shards(rng, edges, 3), cfg, std::size_t{1} << 30, false);
  EXPECT_EQ(r.rounds, 2u);
  EXPECT_EQ(r.machines, 3u);
  EXPECT_EQ(r.coordinator, direct(cfg, edges));
}

TEST(Mpc, SquareInstanceWithNShards) {
  std::mt19937_64 rng(10);
  auto cfg = fixtures::small_config(4, 32);
  auto edges = random_multiset(rng, 4, 3, 16);
  Weight m = 0;
  for (auto& [e, w] : edges) m += w;
  auto r = mpc_simulate(random_shards(rng, edges, 4), cfg, std::size_t{1} << 30, false);
  EXPECT_EQ(r.rounds, 2u);
  EXPECT_EQ(r.coordinator, direct(cfg, edges));
}

TEST(Mpc, TreeAggregationRounds) {
  std::mt19937_64 rng(11);
  auto cfg = fixtures::small_config(4, 33);
  auto edges = random_multiset(rng, 4, 3, 30);
  // 64 shards: groups of 16 machines per vertex, two tree rounds.
  auto r = mpc_simulate(random_shards(rng, edges, 64), cfg, std::size_t{1} << 30, false);
  EXPECT_EQ(r.rounds, 4u);
  EXPECT_EQ(r.machines, 64u);
  EXPECT_EQ(r.coordinator, direct(cfg, edges));
  // 5 shards with n = 4: groups of 2, padded to 8 machines.
  auto p = mpc_simulate(random_shards(rng, edges, 5), cfg, std::size_t{1} << 30, false);
  EXPECT_EQ(p.rounds, 3u);
  EXPECT_EQ(p.machines, 8u);
  EXPECT_EQ(p.coordinator, direct(cfg, edges));
}

TEST(Mpc, BudgetIsEnforcedWithRound) {
  std::mt19937_64 rng(12);
  auto cfg = fixtures::small_config(4, 34);
  auto edges = random_multiset(rng, 4, 3, 10);
  auto shards = random_shards(rng, edges, 6);
  auto ok = mpc_simulate(shards, cfg, std::size_t{1} << 30, false);
  EXPECT_GT(ok.peak_memory, 0u);
  for (auto& r : ok.per_round) EXPECT_LE(r.peak_bytes, ok.peak_memory);
  try {
    mpc_simulate(shards, cfg, ok.peak_memory - 1, false);
    FAIL() << "budget not enforced";
  } catch (const BudgetExceeded& e) {
    EXPECT_GE(e.round(), 1u);
    EXPECT_LE(e.round(), ok.rounds);
  }
  EXPECT_NO_THROW(mpc_simulate(shards, cfg, ok.peak_memory, false));
}

TEST(Mpc, MemoryGrowsWithPayload) {
  std::mt19937_64 rng(13);
  auto cfg = fixtures::small_config(6, 35);
  auto small = random_multiset(rng, 6, 4, 5);
  EdgeMultiset large = small;
  for (auto& [e, w] : random_multiset(rng, 6, 4, 20)) large[e] += w;
  auto a = mpc_simulate({small}, cfg, std::size_t{1} << 30, false);
  auto b = mpc_simulate({large}, cfg, std::size_t{1} << 30, false);
  EXPECT_LE(a.peak_memory, b.peak_memory);
}

TEST(Mpc, RejectsBadShards) {
  auto cfg = fixtures::small_config(4, 36);
  EXPECT_THROW(mpc_simulate({}, cfg, 1 << 20), InputError);
  EXPECT_THROW(mpc_simulate({{{Hyperedge{0, 9}, 1}}}, cfg, 1 << 20), InputError);
}

TEST(Selftest, AllPropertiesPass) {
  for (const auto& r : run_selftest(10, 3)) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

#ifdef HYPERSKETCH_CLI
namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  int status = std::system((std::string(HYPERSKETCH_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct CliDir {
  fs::path dir;
  CliDir() {
    dir = fs::temp_directory_path() / ("hypersketch_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    write("a.txt", "n 6 r 3\n+ 0,1\n+ 1,2\n+ 0,2 2\n+ 3,4\n+ 4,5\n+ 0,5\n- 0,5\n");
    write("b.txt", "n 6 r 3\n+ 3,5\n+ 2,3,4\n");
    write("ab.txt", "n 6 r 3\n+ 0,1\n+ 1,2\n+ 0,2 2\n+ 3,4\n+ 4,5\n+ 0,5\n- 0,5\n+ 3,5\n+ 2,3,4\n");
    write("g.txt", "n 6 r 3\n+ 0,1\n+ 1,2\n+ 0,2 2\n+ 3,4\n+ 4,5\n+ 3,5\n+ 2,3,4\n");
    write("g2.txt", "n 6 r 3\n+ 0,1\n+ 1,2\n+ 0,2 2\n+ 3,4\n+ 4,5\n+ 3,5\n+ 2,3,4 2\n");
  }
  ~CliDir() { fs::remove_all(dir); }
  void write(const std::string& name, const std::string& text) { std::ofstream(dir / name) << text; }
  std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST(Cli, EncodeDecodeVerify) {
  CliDir d;
  ASSERT_EQ(run("encode " + d("ab.txt") + " -o " + d("ab.sk") + " --seed 9"), 0);
  ASSERT_EQ(run("decode " + d("ab.sk") + " --seed 9 -o " + d("s.txt")), 0);
  EXPECT_EQ(run("verify " + d("g.txt") + " " + d("s.txt") + " --eps 1/2"), 0);
  EXPECT_EQ(run("oracle " + d("g.txt") + " --strengths"), 0);
}

TEST(Cli, MergeMatchesConcatenation) {
  CliDir d;
  ASSERT_EQ(run("encode " + d("a.txt") + " -o " + d("a.sk") + " --seed 9"), 0);
  ASSERT_EQ(run("encode " + d("b.txt") + " -o " + d("b.sk") + " --seed 9"), 0);
  ASSERT_EQ(run("encode " + d("ab.txt") + " -o " + d("ab.sk") + " --seed 9"), 0);
  ASSERT_EQ(run("merge " + d("a.sk") + " " + d("b.sk") + " -o " + d("m.sk") + " --seed 9"), 0);
  EXPECT_EQ(slurp(d("m.sk")), slurp(d("ab.sk")));
  EXPECT_EQ(run("merge " + d("a.sk") + " " + d("b.sk") + " -o " + d("x.sk") + " --seed 10"), 2);
}

TEST(Cli, VerifyFailureAndInputErrors) {
  CliDir d;
  EXPECT_EQ(run("verify " + d("g.txt") + " " + d("g.txt") + " --eps 0"), 0);
  EXPECT_EQ(run("verify " + d("g.txt") + " " + d("g2.txt") + " --eps 0"), 1);
  d.write("bad.txt", "n 6 r 3\n+ 0,1\n+ 0,9\n");
  EXPECT_EQ(run("encode " + d("bad.txt") + " -o " + d("bad.sk")), 2);
  EXPECT_EQ(run("encode " + d("missing.txt") + " -o " + d("bad.sk")), 2);
  EXPECT_EQ(run("mpc-sim " + d("ab.txt") + " --shards 3 --budget 100 --no-decode"), 3);
  EXPECT_EQ(run("mpc-sim " + d("ab.txt") + " --shards 8 --seed 9"), 0);
  EXPECT_EQ(run("selftest --trials 3"), 0);
  EXPECT_EQ(run("no-such-command"), 2);
}
#endif
