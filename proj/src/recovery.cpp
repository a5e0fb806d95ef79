#include "hypersketch/recovery.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "hypersketch/errors.hpp"

namespace hypersketch {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kExhausted: return "exhausted";
    case Verdict::kSaturated: return "saturated";
    case Verdict::kUnresolved: return "unresolved";
  }
  return "?";
}

void RecoveryDiagnostics::absorb(const RecoveryDiagnostics& other) {
  for (const auto& [k, v] : other.class_counts) class_counts[k] += v;
  openings += other.openings;
  decodes += other.decodes;
  inconsistent += other.inconsistent;
  for (const auto& [k, v] : other.recovered_per_level) recovered_per_level[k] += v;
}

std::string RecoveryDiagnostics::to_text() const {
  std::ostringstream out;
  out << "openings " << openings << "\n";
  out << "decodes " << decodes << "\n";
  out << "inconsistent " << inconsistent << "\n";
  for (const auto& [level, count] : recovered_per_level) out << "level " << level << " recovered " << count << "\n";
  for (const auto& [key, count] : class_counts) {
    out << "class degree " << key.first << " crossing " << key.second << " edges " << count << "\n";
  }
  return out.str();
}

namespace {

int floor_log2(std::size_t x) { return x == 0 ? -1 : static_cast<int>(std::bit_width(x)) - 1; }

}  // namespace

struct StageDecoder::Pass {
  const Partition& p;
  std::vector<std::size_t> labels;
  double threshold;
  std::vector<Weight> credits;
  std::vector<std::size_t> degree;
  std::vector<bool> exhausted;
  RecoveryOutcome out;

  bool saturated(std::size_t b) const { return static_cast<double>(credits[b]) >= threshold; }
};

StageDecoder::StageDecoder(const SamplerBank& bank, std::size_t stage, const EdgeMultiset& already)
    : residual_(bank.stage_slice(stage)), stage_(stage) {
  if (!already.empty()) residual_.remove_recovered(already, stage);
}

bool StageDecoder::valid_id(const EdgeId& id) const {
  std::size_t pop = id.popcount();
  return id.bit_width() <= config().n && pop >= 2 && pop <= config().r_max;
}

bool StageDecoder::block_exhausted(std::span<const Vertex> block) const {
  return residual_.component_is_zero(FamilyIndex{stage_, 0, 0, 0}, block);
}

void StageDecoder::run_level(std::size_t level, Pass& pass) {
  const SketchConfig& cfg = config();
  const auto& blocks = pass.p.blocks();
  IdFilter accept = [this](const EdgeId& id) { return valid_id(id); };

  for (std::size_t t = 0; t < cfg.reps(); ++t) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (!pass.exhausted[b]) pass.exhausted[b] = block_exhausted(blocks[b]);
    }
    bool open_blocks = false;
    for (std::size_t b = 0; b < blocks.size(); ++b) open_blocks |= !pass.exhausted[b] && !pass.saturated(b);
    if (!open_blocks) return;

    for (std::size_t rho = 0; rho < cfg.rates(); ++rho) {
      FamilyIndex f{stage_, level, rho, t};
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (pass.exhausted[b] || pass.saturated(b)) continue;
        auto sampler = residual_.component_sampler(f, blocks[b]);
        ++pass.out.diagnostics.openings;
        if (sampler.is_zero()) continue;
        auto samples = sampler.harvest(accept);
        EdgeMultiset found;
        for (auto& s : samples) {
          ++pass.out.diagnostics.decodes;
          Hyperedge e = Hyperedge::from_id(s.id);
          // The decoded weight is the edge multiplicity times the summed
          // fingerprint coefficients of the block; anything else is a
          // false decode.
          auto fp = residual_.fingerprint(e, f);
          Weight coef = 0;
          if (fp.size() >= 2) {
            auto top = static_cast<Weight>(fp.size() - 1);
            for (Vertex v : fp) {
              if (!std::binary_search(blocks[b].begin(), blocks[b].end(), v)) continue;
              coef += (v == fp.back()) ? -top : 1;
            }
          }
          if (coef == 0 || s.weight % coef != 0 || s.weight / coef <= 0) {
            ++pass.out.diagnostics.inconsistent;
            continue;
          }
          found[e] += s.weight / coef;
        }
        for (const auto& [e, mult] : found) {
          residual_.remove_recovered({{e, mult}}, stage_);
          recovered_[e] += mult;
          pass.out.recovered[e] += mult;
          pass.out.diagnostics.recovered_per_level[level] += 1;

          std::vector<std::size_t> touched;
          for (Vertex v : e.vertices()) {
            if (v < pass.labels.size() && pass.labels[v] != Partition::npos) touched.push_back(pass.labels[v]);
          }
          std::sort(touched.begin(), touched.end());
          touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
          pass.out.diagnostics.class_counts[{floor_log2(1 + pass.degree[b]), floor_log2(touched.size())}] += 1;
          for (std::size_t c : touched) pass.degree[c] += 1;
          for (std::size_t c : touched) {
            if (!pass.saturated(c)) {
              pass.credits[c] += mult;
              pass.out.credit[e] = c;
              break;
            }
          }
        }
      }
    }
  }
}

void StageDecoder::finish(Pass& pass) {
  const auto& blocks = pass.p.blocks();
  pass.out.components.resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto& c = pass.out.components[b];
    c.credited = pass.credits[b];
    if (block_exhausted(blocks[b])) c.verdict = Verdict::kExhausted;
    else if (pass.saturated(b)) c.verdict = Verdict::kSaturated;
    else c.verdict = Verdict::kUnresolved;
  }
}

RecoveryOutcome StageDecoder::iterative_recovery(std::size_t level, const Partition& p, double phi) {
  if (level >= config().fingerprint_levels()) throw InputError("fingerprint level out of range");
  Pass pass{p, p.labels(config().n), phi * config().log_n(), std::vector<Weight>(p.size(), 0),
            std::vector<std::size_t>(p.size(), 0), std::vector<bool>(p.size(), false), {}};
  run_level(level, pass);
  finish(pass);
  return std::move(pass.out);
}

RecoveryOutcome StageDecoder::recover(const Partition& p, double phi) {
  Pass pass{p, p.labels(config().n), phi * config().log_n(), std::vector<Weight>(p.size(), 0),
            std::vector<std::size_t>(p.size(), 0), std::vector<bool>(p.size(), false), {}};
  for (std::size_t level = config().fingerprint_levels(); level-- > 0;) run_level(level, pass);
  finish(pass);
  return std::move(pass.out);
}

RecoveryOutcome iterative_recovery(const SamplerBank& bank, std::size_t stage, std::size_t level, const Partition& p,
                                   const EdgeMultiset& already, double phi) {
  StageDecoder decoder(bank, stage, already);
  return decoder.iterative_recovery(level, p, phi);
}

RecoveryOutcome recover(const SamplerBank& bank, std::size_t stage, const Partition& p, const EdgeMultiset& already,
                        double phi) {
  StageDecoder decoder(bank, stage, already);
  return decoder.recover(p, phi);
}

}  // namespace hypersketch
