#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypersketch/config.hpp"
#include "hypersketch/errors.hpp"
#include "hypersketch/generate.hpp"
#include "hypersketch/incidence.hpp"
#include "hypersketch/mpc.hpp"
#include "hypersketch/oracle.hpp"
#include "hypersketch/selftest.hpp"
#include "hypersketch/sparsify.hpp"
#include "hypersketch/stream.hpp"
#include "hypersketch/text_format.hpp"

using namespace hypersketch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

struct ConfigFlags {
  std::string file;
  std::optional<std::size_t> n, m_max, r_max, rep_cap, kcut_cap, two_cut_cap;
  std::optional<std::string> eps, seed;
  std::optional<double> C, c_rep, c_conn, delta;
  std::optional<std::int64_t> offset;
  bool lenient = false;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "JSON config file");
    app->add_option("--n", n, "vertex count");
    app->add_option("--m-max", m_max, "bound on distinct edges");
    app->add_option("--r-max", r_max, "bound on edge arity");
    app->add_option("--eps", eps, "target error, e.g. 1/2 or 0.25");
    app->add_option("--C", C, "constant in phi");
    app->add_option("--c-rep", c_rep, "repetition constant");
    app->add_option("--rep-cap", rep_cap, "cap on repetitions per family");
    app->add_option("--c-conn", c_conn, "connectivity sampler constant");
    app->add_option("--delta", delta, "sampler failure probability");
    app->add_option("--kcut-cap", kcut_cap, "oracle vertex cap for k-cuts");
    app->add_option("--two-cut-cap", two_cut_cap, "oracle vertex cap for 2-cuts");
    app->add_option("--offset", offset, "override the preprocessing offset");
    app->add_option("--seed", seed, "master seed: 64 hex digits or a decimal integer");
    app->add_flag("--lenient", lenient, "allow deletions below zero");
  }

  // File (or fallback) first, then explicit flags on top.
  SketchConfig build(const std::optional<SketchConfig>& fallback = std::nullopt) const {
    SketchConfig c = !file.empty() ? SketchConfig::load(file) : fallback.value_or(SketchConfig{});
    if (n) c.n = *n;
    if (m_max) c.m_max = *m_max;
    if (r_max) c.r_max = *r_max;
    if (eps) c.eps = parse_rational(*eps);
    if (C) c.C = *C;
    if (c_rep) c.c_rep = *c_rep;
    if (rep_cap) c.rep_cap = *rep_cap;
    if (c_conn) c.c_conn = *c_conn;
    if (delta) c.delta = *delta;
    if (kcut_cap) c.oracle_vertex_cap = *kcut_cap;
    if (two_cut_cap) c.oracle_two_cut_cap = *two_cut_cap;
    if (offset) c.preprocess_offset = *offset;
    if (lenient) c.strict = false;
    if (seed) c.seed = parse_seed(*seed);
    c.validate();
    return c;
  }

  static Seed parse_seed(const std::string& s) {
    if (!s.empty() && s.size() <= 20 && s.find_first_not_of("0123456789") == std::string::npos) {
      return seed_from_u64(std::stoull(s));
    }
    return seed_from_hex(s);
  }
};

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text_file(path, text);
}

SketchConfig stream_defaults(const Stream& s) {
  SketchConfig c;
  c.n = s.n;
  c.r_max = s.r_max;
  return c;
}

// Merged sketch of every file; the config comes from flags, else from the
// first file's header.
EncodedSketch load_sketches(const std::vector<std::string>& paths, const ConfigFlags& flags, SketchConfig& cfg) {
  auto first = read_bytes(paths.at(0));
  cfg = flags.build(sketch_file_config(first));
  EncodedSketch total = EncodedSketch::deserialize(first, cfg);
  for (std::size_t i = 1; i < paths.size(); ++i) total.merge(EncodedSketch::deserialize(read_bytes(paths[i]), cfg));
  return total;
}

// A sparsifier file, or a plain hypergraph file ("n <n> r <r>" header).
Hypergraph load_weighted(const std::string& path) {
  std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string a, b, c, d;
    if (!(words >> a) || a[0] == '#') continue;
    words >> b >> c;
    if (a == "n" && c == "r") return parse_hypergraph(text, path);
    break;
  }
  return SparsifierOutput::parse(text, path).as_hypergraph();
}

void print_diagnostics(const SparsifierOutput& out) {
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << out.diagnostics.to_text();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear sketches for hypergraph cut sparsification over dynamic streams"};
  app.require_subcommand(1);
  ConfigFlags flags;

  std::string in_path, out_path, graph_path, sparse_path;
  std::vector<std::string> inputs;

  auto* encode = app.add_subcommand("encode", "stream file -> sketch file");
  encode->add_option("stream", in_path, "stream file")->required();
  encode->add_option("-o,--output", out_path, "sketch file")->required();
  flags.attach(encode);

  auto* merge = app.add_subcommand("merge", "sum sketch files");
  merge->add_option("sketches", inputs, "sketch files")->required();
  merge->add_option("-o,--output", out_path, "sketch file")->required();
  flags.attach(merge);

  auto* decode = app.add_subcommand("decode", "sketch files -> sparsifier");
  decode->add_option("sketches", inputs, "sketch files (summed first)")->required();
  decode->add_option("-o,--output", out_path, "sparsifier file (default stdout)");
  bool quiet = false;
  decode->add_flag("-q,--quiet", quiet, "skip diagnostics on stderr");
  flags.attach(decode);

  std::string verify_eps = "1/2";
  bool two_cuts = false;
  auto* verify = app.add_subcommand("verify", "check every cut of a sparsifier against the hypergraph");
  verify->add_option("hypergraph", graph_path, "hypergraph file")->required();
  verify->add_option("sparsifier", sparse_path, "sparsifier or hypergraph file")->required();
  verify->add_option("--eps", verify_eps, "allowed relative error");
  verify->add_flag("--two-cuts", two_cuts, "check only bipartitions");
  std::size_t verify_kcap = 12, verify_2cap = 20;
  verify->add_option("--kcut-cap", verify_kcap, "vertex cap for k-cuts");
  verify->add_option("--two-cut-cap", verify_2cap, "vertex cap for 2-cuts");

  bool show_strengths = false;
  std::string small_cut_factor;
  auto* oracle_cmd = app.add_subcommand("oracle", "exact min normalized cut and strengths");
  oracle_cmd->add_option("hypergraph", graph_path, "hypergraph file")->required();
  oracle_cmd->add_flag("--strengths", show_strengths, "print the strength of every edge");
  oracle_cmd->add_option("--count-below", small_cut_factor, "count cuts of weight <= t * Phi");
  std::size_t oracle_cap = 12;
  oracle_cmd->add_option("--kcut-cap", oracle_cap, "vertex cap");

  std::size_t shards = 4, shard_seed = 1;
  std::size_t budget = std::size_t{1} << 30;
  bool no_decode = false;
  auto* mpc = app.add_subcommand("mpc-sim", "simulate the distributed merge");
  mpc->add_option("stream", in_path, "stream file")->required();
  mpc->add_option("--shards", shards, "machine count k")->check(CLI::PositiveNumber);
  mpc->add_option("--budget", budget, "bytes per machine");
  mpc->add_option("--shard-seed", shard_seed, "seed for the random edge-to-machine split");
  mpc->add_option("-o,--output", out_path, "sparsifier file (default stdout)");
  mpc->add_flag("--no-decode", no_decode, "stop after assembling the sketch");
  flags.attach(mpc);

  std::size_t trials = 50;
  std::uint64_t selftest_seed = 1;
  auto* selftest = app.add_subcommand("selftest", "run the randomized property suite");
  selftest->add_option("--trials", trials, "trials per property");
  selftest->add_option("--seed", selftest_seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*encode) {
      Stream s = parse_stream(read_text_file(in_path), in_path);
      SketchConfig cfg = flags.build(stream_defaults(s));
      if (cfg.n != s.n) throw InputError("stream has n=" + std::to_string(s.n) + " but config has n=" + std::to_string(cfg.n));
      write_bytes(out_path, stream_encode(s.updates, cfg).serialize());
    } else if (*merge) {
      SketchConfig cfg;
      write_bytes(out_path, load_sketches(inputs, flags, cfg).serialize());
    } else if (*decode) {
      SketchConfig cfg;
      EncodedSketch sketch = load_sketches(inputs, flags, cfg);
      auto out = sparsify(sketch.bank, sketch.conn, cfg);
      if (!quiet) print_diagnostics(out);
      emit(out_path, out.to_text());
    } else if (*verify) {
      Hypergraph h = parse_hypergraph(read_text_file(graph_path), graph_path);
      Hypergraph hs = load_weighted(sparse_path);
      if (hs.n() != h.n()) throw InputError("vertex counts differ");
      oracle::Limits limits{verify_kcap, verify_2cap};
      auto report = oracle::verify_sparsifier(h, hs, parse_rational(verify_eps), !two_cuts, limits);
      std::cout << (report.ok ? "ok" : "FAIL") << " cuts " << report.cuts_checked << " worst_ratio "
                << (report.unbounded ? std::string("unbounded") : to_string(report.worst_ratio));
      if (report.worst_cut) std::cout << " at " << report.worst_cut->to_string();
      std::cout << "\n";
      return report.ok ? kExitOk : kExitVerifyFailed;
    } else if (*oracle_cmd) {
      Hypergraph h = parse_hypergraph(read_text_file(graph_path), graph_path);
      oracle::Limits limits{oracle_cap, std::max<std::size_t>(oracle_cap, 20)};
      auto cut = oracle::min_normalized_kcut(h, limits);
      std::cout << "phi " << to_string(cut.phi) << " witness " << cut.witness.to_string() << "\n";
      if (show_strengths) {
        auto s = oracle::strength_recursive(h, limits);
        for (const auto& [e, k] : s.edge_strength) std::cout << "strength " << e.to_string() << " " << to_string(k) << "\n";
      }
      if (!small_cut_factor.empty()) {
        std::cout << "cuts_below " << oracle::count_small_kcuts(h, parse_rational(small_cut_factor), limits) << "\n";
      }
    } else if (*mpc) {
      Stream s = parse_stream(read_text_file(in_path), in_path);
      SketchConfig cfg = flags.build(stream_defaults(s));
      if (cfg.n != s.n) throw InputError("stream has n=" + std::to_string(s.n) + " but config has n=" + std::to_string(cfg.n));
      EdgeMultiset edges = final_multiset(s.updates, cfg);
      std::mt19937_64 rng(shard_seed);
      auto result = mpc_simulate(random_shards(rng, edges, shards), cfg, budget, !no_decode);
      Weight m = 0;
      for (const auto& [e, w] : edges) m += w;
      std::cerr << "machines " << result.machines << " rounds " << result.rounds << " bound "
                << mpc_round_bound(cfg.n, static_cast<std::size_t>(m)) << " peak_bytes " << result.peak_memory << "\n";
      for (const auto& r : result.per_round) {
        std::cerr << "round " << r.round << " messages " << r.messages << " bytes " << r.bytes_moved << " peak "
                  << r.peak_bytes << " on machine " << r.peak_machine << "\n";
      }
      if (result.sparsifier) {
        print_diagnostics(*result.sparsifier);
        emit(out_path, result.sparsifier->to_text());
      }
    } else if (*selftest) {
      bool all = true;
      for (const auto& r : run_selftest(trials, selftest_seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.trials << " trials)";
        if (!r.passed) std::cout << " " << r.detail;
        std::cout << "\n";
        all &= r.passed;
      }
      return all ? kExitOk : kExitVerifyFailed;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConfigMismatch& e) {
    std::cerr << "error: " << e.what() << " (pass the encoding --seed and config)\n";
    return kExitInput;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
