#include "hypersketch/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypersketch/dsu.hpp"
#include "hypersketch/errors.hpp"
#include "hypersketch/text_format.hpp"

namespace hypersketch {

namespace {

// Strength of every contracted edge, or nullopt when the total weight
// already bounds every strength by `ceiling` (strengths never exceed the
// total weight, so the exact computation can be skipped).
std::optional<oracle::StrengthAssignment> strengths_above(const Hypergraph& g, double ceiling,
                                                          const oracle::Limits& limits) {
  if (static_cast<double>(g.total_weight()) <= ceiling) return std::nullopt;
  return oracle::strength_recursive(g, limits);
}

bool rational_above(const Rational& r, double x) { return to_double(r) > x; }

}  // namespace

DecompositionResult strength_decomposition(StageDecoder& decoder, double phi, const Partition& base) {
  const SketchConfig& cfg = decoder.config();
  if (!base.covers(cfg.n)) throw InputError("base partition must cover every vertex");
  const double log_n = cfg.log_n();
  const double merge_threshold = 2.0 * phi * log_n;
  const auto limits = oracle::Limits::from(cfg);
  const auto max_rounds = static_cast<std::size_t>(std::ceil(8.0 * log_n));

  std::vector<std::vector<Vertex>> active = base.blocks();
  std::vector<std::vector<Vertex>> retired;
  DecompositionResult out;

  while (!active.empty() && out.rounds < max_rounds) {
    ++out.rounds;
    Partition p(active);
    auto outcome = decoder.recover(p, phi * log_n);
    out.diagnostics.absorb(outcome.diagnostics);

    std::vector<std::size_t> exhausted;
    for (std::size_t b = 0; b < active.size(); ++b) {
      if (outcome.components[b].verdict == Verdict::kExhausted) exhausted.push_back(b);
    }

    bool merged = false;
    if (2 * exhausted.size() < active.size()) {
      // Contract by active blocks (indices 0..|active|) then retired ones.
      std::vector<std::vector<Vertex>> all = active;
      all.insert(all.end(), retired.begin(), retired.end());
      Partition everything(all);
      Hypergraph g = contract(Hypergraph(cfg.n, decoder.recovered()), everything);
      if (auto strengths = strengths_above(g, merge_threshold, limits)) {
        DisjointSets dsu(active.size());
        for (const auto& [e, s] : strengths->edge_strength) {
          if (!rational_above(s, merge_threshold)) continue;
          std::size_t first = Partition::npos;
          for (Vertex v : e.vertices()) {
            if (v >= active.size()) continue;
            if (first == Partition::npos) first = v;
            else merged |= dsu.unite(first, v);
          }
        }
        if (merged) {
          std::vector<std::vector<Vertex>> groups(active.size());
          for (std::size_t b = 0; b < active.size(); ++b) {
            auto& g2 = groups[dsu.find(b)];
            g2.insert(g2.end(), active[b].begin(), active[b].end());
          }
          active.clear();
          for (auto& g2 : groups) {
            if (!g2.empty()) active.push_back(std::move(g2));
          }
        }
      }
    }
    // Retiring exhausted components is always safe; when nothing merged it is
    // also the only way to make progress.
    if (!merged) {
      std::vector<std::vector<Vertex>> keep;
      std::size_t next = 0;
      for (std::size_t b = 0; b < active.size(); ++b) {
        if (next < exhausted.size() && exhausted[next] == b) {
          retired.push_back(std::move(active[b]));
          ++next;
        } else {
          keep.push_back(std::move(active[b]));
        }
      }
      active = std::move(keep);
    }
  }

  out.complete = active.empty();
  out.components = std::move(retired);
  for (auto& b : active) out.components.push_back(std::move(b));
  std::sort(out.components.begin(), out.components.end());
  out.crossing = decoder.recovered();
  return out;
}

DecompositionResult strength_decomposition(const SamplerBank& bank, std::size_t stage, double phi,
                                           const Partition& base) {
  StageDecoder decoder(bank, stage);
  return strength_decomposition(decoder, phi, base);
}

EdgeMultiset conditional_edge_recovery(StageDecoder& decoder, double phi, double kappa, const Partition& base,
                                       RecoveryDiagnostics* diagnostics) {
  const SketchConfig& cfg = decoder.config();
  auto dec = strength_decomposition(decoder, phi, base);
  if (diagnostics) diagnostics->absorb(dec.diagnostics);
  Partition t(dec.components);
  auto labels = t.labels(cfg.n);
  Hypergraph g(t.size());
  std::vector<std::pair<const Hyperedge*, Hyperedge>> images;
  for (const auto& [e, w] : dec.crossing) {
    if (auto img = contract_edge(e, labels)) {
      g.add_edge(*img, w);
      images.emplace_back(&e, *img);
    }
  }
  auto strengths = strengths_above(g, kappa, oracle::Limits::from(cfg));
  EdgeMultiset out;
  for (const auto& [e, img] : images) {
    if (!strengths || !rational_above(strengths->strength(img), kappa)) out.emplace(*e, dec.crossing.at(*e));
  }
  return out;
}

EdgeMultiset conditional_edge_recovery(const SamplerBank& bank, std::size_t stage, double phi, double kappa,
                                       const Partition& base) {
  if (!(kappa < phi * bank.config().log_n())) {
    throw InputError("conditional recovery needs kappa < phi * log2(n)");
  }
  StageDecoder decoder(bank, stage);
  return conditional_edge_recovery(decoder, phi, kappa, base);
}

StrongComponentSchedule recover_strong_components(const ConnectivityBank& conn) {
  const SketchConfig& cfg = conn.config();
  StrongComponentSchedule out;
  out.partitions.resize(conn.stages());
  out.incomplete.assign(conn.stages(), false);
  IdFilter accept = [&](const EdgeId& id) {
    std::size_t pop = id.popcount();
    return id.bit_width() <= cfg.n && pop >= 2 && pop <= cfg.r_max;
  };

  std::vector<std::size_t> labels(cfg.n);
  for (std::size_t v = 0; v < cfg.n; ++v) labels[v] = v;
  for (std::size_t i = conn.stages(); i-- > 0;) {
    DisjointSets dsu(cfg.n);
    for (std::size_t v = 0; v < cfg.n; ++v) dsu.unite(labels[v], v);
    bool settled = conn.stage_is_zero(i);
    for (std::size_t copy = 0; copy < conn.copies() && !settled; ++copy) {
      std::vector<std::size_t> roots(cfg.n);
      for (std::size_t v = 0; v < cfg.n; ++v) roots[v] = dsu.find(v);
      auto current = Partition::from_labels(roots);
      settled = true;
      for (const auto& block : current.blocks()) {
        auto sampler = conn.component_sampler(i, copy, block);
        if (sampler.is_zero()) continue;
        settled = false;
        if (auto s = sampler.sample(accept)) {
          Hyperedge e = Hyperedge::from_id(s->id);
          for (Vertex v : e.vertices()) dsu.unite(e.vertices().front(), v);
        }
      }
    }
    if (!settled) {
      // One last check: the final merges may have closed every component.
      std::vector<std::size_t> roots(cfg.n);
      for (std::size_t v = 0; v < cfg.n; ++v) roots[v] = dsu.find(v);
      auto current = Partition::from_labels(roots);
      bool open = false;
      for (const auto& block : current.blocks()) {
        open |= !conn.component_sampler(i, 0, block).is_zero();
      }
      out.incomplete[i] = open;
    }
    for (std::size_t v = 0; v < cfg.n; ++v) labels[v] = dsu.find(v);
    out.partitions[i] = Partition::from_labels(labels);
  }
  return out;
}

std::int64_t preprocess_offset(const SketchConfig& config) {
  if (config.preprocess_offset) return *config.preprocess_offset;
  // ceil(log2(n^20 / eps_star^2))
  double es = to_double(config.eps_star());
  return static_cast<std::int64_t>(std::ceil(20.0 * config.log_n() - 2.0 * std::log2(es)));
}

SparsifierOutput sparsify(const SamplerBank& bank, const ConnectivityBank& conn, const SketchConfig& config) {
  if (config.hash() != bank.config().hash() || config.hash() != conn.config().hash()) {
    throw ConfigMismatch("banks were built with a different configuration");
  }
  SparsifierOutput out;
  out.n = config.n;
  out.eps = config.eps;
  out.eps_star = config.eps_star();
  out.seed_hex = seed_to_hex(config.seed);

  const double phi = config.phi();
  const double kappa = config.kappa();
  // Conditional recovery needs kappa < phi_dec * log2(n); kappa = 100 phi
  // never satisfies that for small n, so the decoder runs with the smallest
  // comfortable phi that does.
  const double phi_dec = std::max(phi, 2.0 * kappa / config.log_n());

  const std::int64_t offset = preprocess_offset(config);
  std::optional<StrongComponentSchedule> schedule;
  bool clamped_any = false;

  SamplerBank work = bank;
  for (std::size_t i = 0; i < bank.stage_count(); ++i) {
    bool remaining = false;
    for (std::size_t s = i; s < bank.stage_count(); ++s) remaining |= !work.stage_is_zero(s);
    if (!remaining) break;
    out.stages_decoded = i + 1;

    Partition base = Partition::singletons(config.n);
    std::int64_t source = static_cast<std::int64_t>(i) + offset;
    if (source >= 0 && source < static_cast<std::int64_t>(conn.stages())) {
      if (!schedule) schedule = recover_strong_components(conn);
      base = schedule->partitions[static_cast<std::size_t>(source)];
    } else {
      clamped_any = true;
    }

    StageDecoder decoder(work, i);
    EdgeMultiset f;
    try {
      f = conditional_edge_recovery(decoder, phi_dec, kappa, base, &out.diagnostics);
    } catch (const CapExceeded& e) {
      throw CapExceeded("stage " + std::to_string(i) + ": " + e.what());
    }
    for (const auto& [e, mult] : f) out.edges.push_back({e, mult << i, i});
    work.remove_recovered(f, i + 1);
    if (i + 1 == bank.stage_count() && !decoder.residual_is_zero()) {
      out.warnings.push_back("last stage still holds unrecovered edges");
    }
  }
  if (clamped_any) {
    out.warnings.push_back("preprocessing offset " + std::to_string(offset) +
                           " is past the connectivity schedule; singleton base partitions used");
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const SparsifierEdge& a, const SparsifierEdge& b) { return a.edge < b.edge; });
  return out;
}

Hypergraph SparsifierOutput::as_hypergraph() const {
  Hypergraph h(n);
  for (const auto& e : edges) h.add_edge(e.edge, e.weight);
  return h;
}

std::string SparsifierOutput::to_text() const {
  std::ostringstream out;
  out << "n " << n << "\n";
  out << "eps " << to_string(eps) << "\n";
  out << "eps_star " << to_string(eps_star) << "\n";
  out << "seed " << seed_hex << "\n";
  for (const auto& w : warnings) out << "# warning: " << w << "\n";
  for (const auto& e : edges) out << "e " << e.edge.to_string() << " " << e.weight << " " << e.stage << "\n";
  return out.str();
}

SparsifierOutput SparsifierOutput::parse(const std::string& text, const std::string& source) {
  SparsifierOutput out;
  bool have_n = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    LineScanner scan(line, source, lineno);
    if (scan.at_end_or_comment()) continue;
    std::string key = scan.word();
    if (key == "n") {
      out.n = scan.unsigned_number();
      have_n = true;
    } else if (key == "eps") {
      out.eps = scan.rational();
    } else if (key == "eps_star") {
      out.eps_star = scan.rational();
    } else if (key == "seed") {
      out.seed_hex = scan.word();
    } else if (key == "e") {
      if (!have_n) scan.fail("edge before the 'n' header");
      Hyperedge e = scan.edge(out.n);
      auto weight = static_cast<Weight>(scan.unsigned_number());
      std::size_t stage = scan.unsigned_number();
      if (weight < 1) scan.fail("edge weight must be positive");
      out.edges.push_back({e, weight, stage});
    } else {
      scan.fail("unknown record '" + key + "'", 1);
    }
    scan.expect_end();
  }
  if (!have_n) throw ParseError(source, lineno == 0 ? 1 : lineno, 1, "missing 'n' header");
  return out;
}

}  // namespace hypersketch
