#include "hypersketch/selftest.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "hypersketch/generate.hpp"
#include "hypersketch/l0_sampler.hpp"
#include "hypersketch/mpc.hpp"
#include "hypersketch/one_sparse.hpp"
#include "hypersketch/oracle.hpp"
#include "hypersketch/sparse_recovery.hpp"
#include "hypersketch/sparsify.hpp"
#include "hypersketch/stream.hpp"

namespace hypersketch {

namespace {

SketchConfig small_config(std::size_t n, std::uint64_t seed) {
  SketchConfig c;
  c.n = n;
  c.m_max = 64;
  c.r_max = std::min<std::size_t>(4, n);
  c.rep_cap = 2;
  c.seed = seed_from_u64(seed);
  return c;
}

using Check = std::function<std::string(std::mt19937_64&, std::size_t trial)>;

SelftestResult run(const std::string& name, std::size_t trials, std::mt19937_64& rng, const Check& check) {
  SelftestResult r{name, true, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    ++r.trials;
    std::string failure;
    try {
      failure = check(rng, t);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (!failure.empty()) {
      r.passed = false;
      r.detail = "trial " + std::to_string(t) + ": " + failure;
      break;
    }
  }
  return r;
}

}  // namespace

std::vector<SelftestResult> run_selftest(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SelftestResult> out;

  out.push_back(run("one-sparse tester decodes exactly", trials, rng, [](auto& g, std::size_t t) {
    Prf prf(seed_from_u64(t));
    OneSparseTester tester(prf, 0, alpha_limbs_for(64));
    std::map<std::uint64_t, std::int64_t> truth;
    std::size_t support = 1 + g() % 4;
    while (truth.size() < support) truth[g()] = 1 + static_cast<std::int64_t>(g() % 9);
    for (auto [id, w] : truth) tester.update(EdgeId::from_limbs({id}), w);
    auto d = tester.decode();
    if (support == 1) {
      auto [id, w] = *truth.begin();
      if (d.kind != DecodeKind::kOneSparse || d.id.to_u64() != std::optional<std::uint64_t>(id) || d.weight != w) return std::string("missed a 1-sparse vector");
    } else if (d.kind != DecodeKind::kDense) {
      return std::string("dense vector not flagged");
    }
    return std::string();
  }));

  out.push_back(run("l0 sampler returns a support element", trials, rng, [](auto& g, std::size_t t) {
    Prf prf(seed_from_u64(1000 + t));
    L0Shape shape{l0_levels(256), l0_reps(1e-3, 4.0), alpha_limbs_for(64)};
    L0Sampler s(shape, prf, PrfTag{Domain::kUser, {1, 0, 0, 0}});
    std::map<std::uint64_t, std::int64_t> truth;
    std::size_t support = 1 + g() % 200;
    while (truth.size() < support) truth[g() % 100000] = 1 + static_cast<std::int64_t>(g() % 5);
    for (auto [id, w] : truth) s.update(EdgeId::from_limbs({id}), w);
    auto got = s.sample();
    if (!got) return std::string("no sample");
    auto it = truth.find(got->id.to_u64().value_or(~0ull));
    if (it == truth.end() || it->second != got->weight) return std::string("sample outside the support");
    return std::string();
  }));

  out.push_back(run("sparse recovery is exact up to s", trials, rng, [](auto& g, std::size_t t) {
    Prf prf(seed_from_u64(2000 + t));
    std::size_t s = 1 + g() % 6;
    SparseRecoverySketch sk(s, 1 << 20, prf);
    std::map<std::uint64_t, std::int64_t> truth;
    std::size_t support = g() % (s + 3);
    while (truth.size() < support) truth[g() % (1 << 20)] = (g() % 2 ? 1 : -1) * static_cast<std::int64_t>(1 + g() % 5);
    for (auto [id, w] : truth) sk.update(id, w);
    auto r = sk.recover();
    if (support <= s && (r.dense || r.entries != truth)) return std::string("wrong recovery");
    if (support > s && !r.dense) return std::string("overflow not flagged");
    return std::string();
  }));

  out.push_back(run("sketches are linear and order-free", std::max<std::size_t>(1, trials / 4), rng,
                    [](auto& g, std::size_t t) {
    auto cfg = small_config(6, 3000 + t);
    auto a = random_multiset(g, cfg.n, cfg.r_max, 12, 2);
    auto b = random_multiset(g, cfg.n, cfg.r_max, 12, 2);
    EncodedSketch sa(cfg), sb(cfg), sab(cfg);
    for (auto& [e, w] : a) sa.update(e, w), sab.update(e, w);
    for (auto& [e, w] : b) sb.update(e, w), sab.update(e, w);
    sa.merge(sb);
    if (sa.serialize() != sab.serialize()) return std::string("merge differs from joint encoding");
    EdgeMultiset ab = a;
    for (auto& [e, w] : b) ab[e] += w;
    auto stream = random_stream(g, ab, cfg.n, cfg.r_max, 10);
    if (stream_encode(stream, cfg).serialize() != sab.serialize()) return std::string("stream order changed the sketch");
    return std::string();
  }));

  out.push_back(run("strength definitions agree", trials, rng, [](auto& g, std::size_t) {
    std::size_t n = 3 + g() % 4;
    Hypergraph h(n, random_multiset(g, n, 3, 2 + g() % 8, 3));
    auto rec = oracle::strength_recursive(h);
    for (const auto& [e, w] : h.edges()) {
      if (rec.strength(e) != oracle::strength_characterization(h, e)) return "edge " + e.to_string();
    }
    return std::string();
  }));

  out.push_back(run("encode, decode and verify", std::max<std::size_t>(1, trials / 10), rng,
                    [](auto& g, std::size_t t) {
    auto cfg = small_config(6, 4000 + t);
    auto edges = random_multiset(g, cfg.n, cfg.r_max, 15, 2);
    EncodedSketch s(cfg);
    for (auto& [e, w] : edges) s.update(e, w);
    auto sp = sparsify(s.bank, s.conn, cfg);
    auto rep = oracle::verify_sparsifier(Hypergraph(cfg.n, edges), sp.as_hypergraph(), cfg.eps, true);
    if (!rep.ok) return "worst ratio " + to_string(rep.worst_ratio);
    return std::string();
  }));

  out.push_back(run("mpc assembly matches direct encoding", std::max<std::size_t>(1, trials / 10), rng,
                    [](auto& g, std::size_t t) {
    auto cfg = small_config(4, 5000 + t);
    auto edges = random_multiset(g, cfg.n, cfg.r_max, 10, 2);
    std::size_t k = 1 + g() % 10;
    auto res = mpc_simulate(random_shards(g, edges, k), cfg, std::size_t{1} << 30, false);
    EncodedSketch direct(cfg);
    for (auto& [e, w] : edges) direct.update(e, w);
    if (!(res.coordinator == direct)) return std::string("coordinator sketch differs");
    return std::string();
  }));

  return out;
}

}  // namespace hypersketch
