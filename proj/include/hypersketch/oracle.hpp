#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hypersketch/config.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/rational.hpp"

// Brute-force ground truth over all vertex partitions. Everything here is
// exponential in n and guarded by explicit caps.
namespace hypersketch::oracle {

struct Limits {
  std::size_t kcut_vertex_cap = 12;
  std::size_t two_cut_vertex_cap = 20;

  static Limits from(const SketchConfig& config) {
    return Limits{config.oracle_vertex_cap, config.oracle_two_cut_cap};
  }
};

struct MinCut {
  Rational phi{0};
  Partition witness;
};

// Minimum over partitions into k >= 2 blocks of crossing weight / (k - 1).
// Ties go to the smaller k, then to the lexicographically first
// restricted-growth string.
MinCut min_normalized_kcut(const Hypergraph& h, const Limits& limits = {});

class StrengthAssignment {
 public:
  std::map<Hyperedge, Rational> edge_strength;

  Rational strength(const Hyperedge& e) const;
  std::vector<Rational> distinct_values() const;
  // Smallest strength among edges inside `vertices`; nullopt if none.
  std::optional<Rational> component_strength(std::span<const Vertex> vertices) const;
};

// Peels the minimum normalized cut, assigns its value to the crossing
// edges and recurses into every block.
StrengthAssignment strength_recursive(const Hypergraph& h, const Limits& limits = {});

// Maximum of min_normalized_kcut(H[S]) over vertex sets S containing e.
Rational strength_characterization(const Hypergraph& h, const Hyperedge& e, const Limits& limits = {});

// Partitions (any k >= 2) with crossing weight <= t * Phi(H).
std::uint64_t count_small_kcuts(const Hypergraph& h, const Rational& t, const Limits& limits = {});

// Edges of strength <= w, with their weights.
EdgeMultiset edges_below_strength(const Hypergraph& h, const Rational& w, const Limits& limits = {});
EdgeMultiset edges_below_strength(const Hypergraph& h, const StrengthAssignment& s, const Rational& w);

struct VerifyReport {
  bool ok = true;
  // Cut of Hs over cut of H, for the cut that deviates most from 1.
  Rational worst_ratio{1};
  // Some cut is empty in H but not in Hs.
  bool unbounded = false;
  std::uint64_t cuts_checked = 0;
  std::optional<Partition> worst_cut;
};

// kcuts = false checks the 2^(n-1) - 1 bipartitions; kcuts = true checks
// every partition into at least two blocks.
VerifyReport verify_sparsifier(const Hypergraph& h, const Hypergraph& hs, const Rational& eps, bool kcuts,
                               const Limits& limits = {});

// Calls visit(labels, k) for every partition of `count` items as a
// restricted-growth string, in lexicographic order, including k = 1.
template <class Visit>
void for_each_partition(std::size_t count, Visit&& visit) {
  if (count == 0) return;
  std::vector<std::size_t> a(count, 0), top(count, 0);
  while (true) {
    visit(static_cast<const std::vector<std::size_t>&>(a), top[count - 1] + 1);
    std::size_t i = count - 1;
    while (i > 0 && a[i] > top[i - 1]) --i;
    if (i == 0) return;
    ++a[i];
    top[i] = std::max(top[i - 1], a[i]);
    for (std::size_t j = i + 1; j < count; ++j) {
      a[j] = 0;
      top[j] = top[i];
    }
  }
}

}  // namespace hypersketch::oracle
