#include "hypersketch/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "hypersketch/errors.hpp"

namespace hypersketch::oracle {

namespace {

using Mask = std::uint32_t;
constexpr std::size_t kTableLimit = 26;

// inside[S] = total weight of edges contained in S, for every S.
class SubsetTable {
 public:
  SubsetTable(const Hypergraph& h) : n_(h.n()), inside_(std::size_t{1} << h.n(), 0) {
    for (const auto& [e, w] : h.edges()) inside_[vertex_mask(e)] += w;
    for (std::size_t b = 0; b < n_; ++b) {
      Mask bit = Mask{1} << b;
      for (Mask m = 0; m < inside_.size(); ++m) {
        if (m & bit) inside_[m] += inside_[m ^ bit];
      }
    }
  }

  Weight inside(Mask m) const { return inside_[m]; }
  Mask full() const { return static_cast<Mask>((std::size_t{1} << n_) - 1); }

 private:
  std::size_t n_;
  std::vector<Weight> inside_;
};

struct CutOnMask {
  Weight crossing = 0;
  std::size_t k = 0;
  std::vector<Mask> blocks;
};

// a/(k-1) < b/(l-1) without division.
bool ratio_less(Weight a, std::size_t k, Weight b, std::size_t l) {
  return static_cast<__int128>(a) * static_cast<__int128>(l - 1) < static_cast<__int128>(b) * static_cast<__int128>(k - 1);
}

bool ratio_equal(Weight a, std::size_t k, Weight b, std::size_t l) {
  return static_cast<__int128>(a) * static_cast<__int128>(l - 1) == static_cast<__int128>(b) * static_cast<__int128>(k - 1);
}

std::vector<Vertex> members(Mask m) {
  std::vector<Vertex> out;
  while (m) {
    out.push_back(static_cast<Vertex>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

// Minimum normalized cut of H[S]; S needs at least two vertices.
CutOnMask min_cut_on(const SubsetTable& table, Mask s) {
  auto vs = members(s);
  Weight total = table.inside(s);
  CutOnMask best;
  std::vector<Mask> blocks(vs.size());
  for_each_partition(vs.size(), [&](const std::vector<std::size_t>& a, std::size_t k) {
    if (k < 2) return;
    std::fill(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(k), 0);
    for (std::size_t i = 0; i < vs.size(); ++i) blocks[a[i]] |= Mask{1} << vs[i];
    Weight kept = 0;
    for (std::size_t b = 0; b < k; ++b) kept += table.inside(blocks[b]);
    Weight crossing = total - kept;
    if (best.k == 0 || ratio_less(crossing, k, best.crossing, best.k) ||
        (ratio_equal(crossing, k, best.crossing, best.k) && k < best.k)) {
      best.crossing = crossing;
      best.k = k;
      best.blocks.assign(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(k));
    }
  });
  return best;
}

void require_cap(const Hypergraph& h, std::size_t cap, const char* what) {
  std::size_t limit = std::min(cap, kTableLimit);
  if (h.n() > limit) {
    throw CapExceeded(std::string(what) + " needs n <= " + std::to_string(limit) + ", got " + std::to_string(h.n()));
  }
}

Partition to_partition(const std::vector<Mask>& blocks) {
  std::vector<std::vector<Vertex>> out;
  for (Mask b : blocks) out.push_back(members(b));
  return Partition(std::move(out));
}

}  // namespace

MinCut min_normalized_kcut(const Hypergraph& h, const Limits& limits) {
  require_cap(h, limits.kcut_vertex_cap, "minimum normalized k-cut");
  if (h.n() < 2) throw InputError("minimum k-cut needs at least two vertices");
  SubsetTable table(h);
  auto best = min_cut_on(table, table.full());
  return MinCut{Rational(best.crossing, static_cast<std::int64_t>(best.k - 1)), to_partition(best.blocks)};
}

Rational StrengthAssignment::strength(const Hyperedge& e) const {
  auto it = edge_strength.find(e);
  if (it == edge_strength.end()) throw InputError("edge " + e.to_string() + " has no strength (not in H)");
  return it->second;
}

std::vector<Rational> StrengthAssignment::distinct_values() const {
  std::set<Rational> values;
  for (const auto& [e, s] : edge_strength) values.insert(s);
  return {values.begin(), values.end()};
}

std::optional<Rational> StrengthAssignment::component_strength(std::span<const Vertex> vertices) const {
  std::set<Vertex> inside(vertices.begin(), vertices.end());
  std::optional<Rational> out;
  for (const auto& [e, s] : edge_strength) {
    bool contained = std::all_of(e.vertices().begin(), e.vertices().end(), [&](Vertex v) { return inside.count(v) > 0; });
    if (contained && (!out || s < *out)) out = s;
  }
  return out;
}

StrengthAssignment strength_recursive(const Hypergraph& h, const Limits& limits) {
  require_cap(h, limits.kcut_vertex_cap, "strength computation");
  SubsetTable table(h);
  std::vector<std::pair<Mask, const Hyperedge*>> edges;
  for (const auto& [e, w] : h.edges()) edges.emplace_back(static_cast<Mask>(vertex_mask(e)), &e);
  StrengthAssignment out;

  std::vector<Mask> work{table.full()};
  while (!work.empty()) {
    Mask s = work.back();
    work.pop_back();
    if (std::popcount(s) < 2 || table.inside(s) == 0) continue;
    auto cut = min_cut_on(table, s);
    Rational phi(cut.crossing, static_cast<std::int64_t>(cut.k - 1));
    for (const auto& [m, e] : edges) {
      if ((m & s) != m) continue;
      bool within_block = std::any_of(cut.blocks.begin(), cut.blocks.end(), [&](Mask b) { return (m & b) == m; });
      if (!within_block) out.edge_strength.emplace(*e, phi);
    }
    for (Mask b : cut.blocks) work.push_back(b);
  }
  return out;
}

Rational strength_characterization(const Hypergraph& h, const Hyperedge& e, const Limits& limits) {
  require_cap(h, limits.kcut_vertex_cap, "strength characterization");
  if (h.weight(e) == 0) throw InputError("edge " + e.to_string() + " is not in the hypergraph");
  SubsetTable table(h);
  Mask base = static_cast<Mask>(vertex_mask(e));
  Mask rest = table.full() & ~base;
  Rational best(0);
  // Every subset of the remaining vertices, added to e.
  Mask extra = 0;
  while (true) {
    Mask s = base | extra;
    auto cut = min_cut_on(table, s);
    Rational phi(cut.crossing, static_cast<std::int64_t>(cut.k - 1));
    if (phi > best) best = phi;
    if (extra == rest) break;
    extra = (extra - rest) & rest;
  }
  return best;
}

std::uint64_t count_small_kcuts(const Hypergraph& h, const Rational& t, const Limits& limits) {
  require_cap(h, limits.kcut_vertex_cap, "cut counting");
  SubsetTable table(h);
  auto best = min_cut_on(table, table.full());
  Rational bound = t * Rational(best.crossing, static_cast<std::int64_t>(best.k - 1));
  Weight total = table.inside(table.full());
  std::uint64_t count = 0;
  std::vector<Mask> blocks(h.n());
  for_each_partition(h.n(), [&](const std::vector<std::size_t>& a, std::size_t k) {
    if (k < 2) return;
    std::fill(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(k), 0);
    for (std::size_t i = 0; i < a.size(); ++i) blocks[a[i]] |= Mask{1} << i;
    Weight kept = 0;
    for (std::size_t b = 0; b < k; ++b) kept += table.inside(blocks[b]);
    if (Rational(total - kept) <= bound) ++count;
  });
  return count;
}

EdgeMultiset edges_below_strength(const Hypergraph& h, const StrengthAssignment& s, const Rational& w) {
  EdgeMultiset out;
  for (const auto& [e, weight] : h.edges()) {
    if (s.strength(e) <= w) out.emplace(e, weight);
  }
  return out;
}

EdgeMultiset edges_below_strength(const Hypergraph& h, const Rational& w, const Limits& limits) {
  return edges_below_strength(h, strength_recursive(h, limits), w);
}

VerifyReport verify_sparsifier(const Hypergraph& h, const Hypergraph& hs, const Rational& eps, bool kcuts,
                               const Limits& limits) {
  if (h.n() != hs.n()) throw InputError("hypergraph and sparsifier have different vertex counts");
  require_cap(h, kcuts ? limits.kcut_vertex_cap : limits.two_cut_vertex_cap,
              kcuts ? "k-cut verification" : "2-cut verification");
  if (h.n() < 2) throw InputError("verification needs at least two vertices");
  SubsetTable th(h), ts(hs);
  VerifyReport report;
  Rational worst_dev(-1);
  auto check = [&](Weight c, Weight cs, auto&& make_cut) {
    ++report.cuts_checked;
    if (c == 0) {
      if (cs != 0 && !report.unbounded) {
        report.ok = false;
        report.unbounded = true;
        report.worst_cut = make_cut();
      }
      return;
    }
    Rational ratio(cs, c);
    Rational dev = ratio > Rational(1) ? ratio - Rational(1) : Rational(1) - ratio;
    if (dev > eps) report.ok = false;
    if (!report.unbounded && dev > worst_dev) {
      worst_dev = dev;
      report.worst_ratio = ratio;
      report.worst_cut = make_cut();
    }
  };

  Weight total_h = th.inside(th.full());
  Weight total_s = ts.inside(ts.full());
  if (!kcuts) {
    // Bipartitions with the top vertex on the complement side.
    Mask half = static_cast<Mask>((std::size_t{1} << (h.n() - 1)) - 1);
    for (Mask s = 1; s <= half; ++s) {
      Mask t = th.full() & ~s;
      Weight c = total_h - th.inside(s) - th.inside(t);
      Weight cs = total_s - ts.inside(s) - ts.inside(t);
      check(c, cs, [&] { return to_partition({s, t}); });
    }
    return report;
  }
  std::vector<Mask> blocks(h.n());
  for_each_partition(h.n(), [&](const std::vector<std::size_t>& a, std::size_t k) {
    if (k < 2) return;
    std::fill(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(k), 0);
    for (std::size_t i = 0; i < a.size(); ++i) blocks[a[i]] |= Mask{1} << i;
    Weight kept = 0, kept_s = 0;
    for (std::size_t b = 0; b < k; ++b) {
      kept += th.inside(blocks[b]);
      kept_s += ts.inside(blocks[b]);
    }
    check(total_h - kept, total_s - kept_s, [&] {
      return to_partition(std::vector<Mask>(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(k)));
    });
  });
  return report;
}

}  // namespace hypersketch::oracle
