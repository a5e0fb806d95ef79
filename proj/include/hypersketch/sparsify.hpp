#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hypersketch/config.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/incidence.hpp"
#include "hypersketch/oracle.hpp"
#include "hypersketch/recovery.hpp"

namespace hypersketch {

struct DecompositionResult {
  // Disjoint blocks covering [0, n): singletons or merged strong components.
  std::vector<std::vector<Vertex>> components;
  // Every edge recovered while decomposing, with multiplicities.
  EdgeMultiset crossing;
  std::size_t rounds = 0;
  // False if some component was still active when the round limit hit.
  bool complete = true;
  RecoveryDiagnostics diagnostics;
};

// Repeated recovery with saturation threshold phi * log2(n)^2. Rounds where
// fewer than half the active components are exhausted merge components
// joined by recovered edges of strength > 2 * phi * log2(n); other rounds
// retire the exhausted components.
DecompositionResult strength_decomposition(StageDecoder& decoder, double phi, const Partition& base);
DecompositionResult strength_decomposition(const SamplerBank& bank, std::size_t stage, double phi,
                                           const Partition& base);

// Edges of strength <= kappa in the stage hypergraph contracted by `base`.
EdgeMultiset conditional_edge_recovery(StageDecoder& decoder, double phi, double kappa, const Partition& base,
                                       RecoveryDiagnostics* diagnostics = nullptr);
// Requires kappa < phi * log2(n).
EdgeMultiset conditional_edge_recovery(const SamplerBank& bank, std::size_t stage, double phi, double kappa,
                                       const Partition& base);

struct StrongComponentSchedule {
  // partitions[i]: connected components of connectivity stage i.
  std::vector<Partition> partitions;
  // Stages where the sampler budget ran out before connectivity settled.
  std::vector<bool> incomplete;
};

// Opens connectivity stages from the sparsest to the densest, growing
// components by sampling one crossing edge per component per copy.
StrongComponentSchedule recover_strong_components(const ConnectivityBank& conn);

struct SparsifierEdge {
  Hyperedge edge;
  Weight weight = 0;
  std::size_t stage = 0;
};

struct SparsifierOutput {
  std::size_t n = 0;
  Rational eps{0};
  Rational eps_star{0};
  std::string seed_hex;
  std::vector<SparsifierEdge> edges;
  std::size_t stages_decoded = 0;
  std::vector<std::string> warnings;
  RecoveryDiagnostics diagnostics;

  Hypergraph as_hypergraph() const;
  std::string to_text() const;
  static SparsifierOutput parse(const std::string& text, const std::string& source = "<sparsifier>");
};

// Preprocessing offset into the connectivity schedule (before clamping).
std::int64_t preprocess_offset(const SketchConfig& config);

SparsifierOutput sparsify(const SamplerBank& bank, const ConnectivityBank& conn, const SketchConfig& config);

}  // namespace hypersketch
