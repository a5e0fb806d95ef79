#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypersketch/prf.hpp"
#include "hypersketch/rational.hpp"

namespace hypersketch {

// eps / ceil(log2(n / eps))^2. Requires 0 < eps < 1 and n >= 1.
Rational set_error_parameter(const Rational& eps, std::size_t n);

// ceil(log2(x)) for x >= 1, and 0 for x <= 1.
std::size_t ceil_log2(std::uint64_t x);

struct SketchConfig {
  std::size_t n = 8;
  std::uint64_t m_max = 256;
  std::size_t r_max = 4;
  Rational eps{1, 2};

  // phi = C * log2(n) / eps_star^2, kappa = 100 * phi.
  double C = 2.0;
  // Repetitions per (stage, level, rate): min(rep_cap, ceil(c_rep * phi * log2 n)).
  double c_rep = 1.0;
  std::size_t rep_cap = 8;
  // Connectivity samplers per vertex and stage: ceil(c_conn * ceil(log2 n)).
  double c_conn = 4.0;
  // Per-sampler failure probability; 0 selects 1/n^3.
  double delta = 0.0;
  // Sampler repetitions: ceil(l0_rep_constant * ln(1/delta)).
  double l0_rep_constant = 4.0;
  // Extra connectivity stages beyond the sampler stages; 0 selects ceil(log2 n).
  std::size_t conn_extra_stages = 0;

  std::size_t oracle_vertex_cap = 12;
  std::size_t oracle_two_cut_cap = 20;
  std::size_t sparse_cap = 8;

  // Replaces the computed preprocessing offset when set.
  std::optional<std::int64_t> preprocess_offset;
  // Reject stream deletions that drive a multiplicity negative.
  bool strict = true;

  Seed seed{};

  void validate() const;

  std::size_t log2n() const { return ceil_log2(n) == 0 ? 1 : ceil_log2(n); }
  double log_n() const;
  Rational eps_star() const { return set_error_parameter(eps, n); }
  double phi() const;
  double kappa() const { return 100.0 * phi(); }

  std::size_t stages() const;
  std::size_t fingerprint_levels() const { return log2n() + 1; }
  std::size_t rates() const { return log2n() + 1; }
  std::size_t reps() const;

  double sampler_delta() const;
  std::size_t sampler_levels() const;
  std::size_t sampler_reps() const;
  std::size_t alpha_limbs() const;

  std::size_t conn_stages() const;
  std::size_t conn_copies() const;
  std::size_t conn_levels() const;

  // Canonical JSON of every field that shapes the sketch (not the seed or
  // strict).
  std::string canonical() const;
  std::uint64_t hash() const;

  std::string to_json(bool include_seed = true) const;
  static SketchConfig from_json(const std::string& text);
  static SketchConfig load(const std::string& path);
};

}  // namespace hypersketch
