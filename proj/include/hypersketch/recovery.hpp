#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypersketch/hypergraph.hpp"
#include "hypersketch/incidence.hpp"

namespace hypersketch {

enum class Verdict {
  // Every crossing edge incident to the block has been recovered.
  kExhausted,
  // At least phi * log2(n) recovered edges are credited to the block.
  kSaturated,
  // Neither, because the repetition budget ran out.
  kUnresolved,
};

const char* to_string(Verdict v);

struct ComponentOutcome {
  Verdict verdict = Verdict::kUnresolved;
  // Total multiplicity of edges credited to this block.
  Weight credited = 0;
};

struct RecoveryDiagnostics {
  // (floor(log2(1 + recovered degree of the block)), floor(log2(blocks the
  // edge touches))) -> number of recovered edges.
  std::map<std::pair<int, int>, std::size_t> class_counts;
  std::size_t openings = 0;
  std::size_t decodes = 0;
  std::size_t inconsistent = 0;
  std::map<std::size_t, std::size_t> recovered_per_level;

  void absorb(const RecoveryDiagnostics& other);
  std::string to_text() const;
};

struct RecoveryOutcome {
  std::vector<ComponentOutcome> components;
  // Edges found by this call, with multiplicities.
  EdgeMultiset recovered;
  // Block credited as the unique representative of each recovered edge.
  std::map<Hyperedge, std::size_t> credit;
  RecoveryDiagnostics diagnostics;
};

// Decoder for one stage of a sampler bank. Holds a private residual copy of
// the stage from which every recovered edge is subtracted as soon as it is
// found, so later openings see only what is left.
class StageDecoder {
 public:
  StageDecoder(const SamplerBank& bank, std::size_t stage, const EdgeMultiset& already = {});

  // One fingerprint level: every repetition and rate, every block.
  RecoveryOutcome iterative_recovery(std::size_t level, const Partition& p, double phi);
  // Levels from the coarsest fingerprint down to level 0 (no fingerprint).
  RecoveryOutcome recover(const Partition& p, double phi);

  // Everything subtracted since construction, excluding `already`.
  const EdgeMultiset& recovered() const { return recovered_; }
  bool block_exhausted(std::span<const Vertex> block) const;
  bool residual_is_zero() const { return residual_.is_zero(); }
  const SamplerBank& residual() const { return residual_; }
  std::size_t stage() const { return stage_; }
  const SketchConfig& config() const { return residual_.config(); }

 private:
  struct Pass;
  void run_level(std::size_t level, Pass& pass);
  void finish(Pass& pass);
  bool valid_id(const EdgeId& id) const;

  SamplerBank residual_;
  std::size_t stage_;
  EdgeMultiset recovered_;
};

// Free-function forms; each builds its own decoder from a copy of the stage.
RecoveryOutcome iterative_recovery(const SamplerBank& bank, std::size_t stage, std::size_t level, const Partition& p,
                                   const EdgeMultiset& already, double phi);
RecoveryOutcome recover(const SamplerBank& bank, std::size_t stage, const Partition& p, const EdgeMultiset& already,
                        double phi);

}  // namespace hypersketch
