#include "hypersketch/generate.hpp"

#include <algorithm>

namespace hypersketch {

Hyperedge random_edge(std::mt19937_64& rng, std::size_t n, std::size_t r_max) {
  std::size_t top = std::min(r_max, n);
  std::size_t arity = 2 + rng() % (top - 1);
  std::vector<Vertex> all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
  for (std::size_t i = 0; i < arity; ++i) std::swap(all[i], all[i + rng() % (n - i)]);
  all.resize(arity);
  return Hyperedge(std::move(all));
}

EdgeMultiset random_multiset(std::mt19937_64& rng, std::size_t n, std::size_t r_max, std::size_t draws,
                             Weight max_mult) {
  EdgeMultiset out;
  for (std::size_t i = 0; i < draws; ++i) {
    out[random_edge(rng, n, r_max)] += 1 + static_cast<Weight>(rng() % static_cast<std::uint64_t>(max_mult));
  }
  return out;
}

std::vector<StreamUpdate> random_stream(std::mt19937_64& rng, const EdgeMultiset& target, std::size_t n,
                                        std::size_t r_max, std::size_t churn) {
  // Random timestamps; every churn deletion lands after its own insertion.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, StreamUpdate>> timed;
  for (const auto& [e, w] : target) {
    for (Weight i = 0; i < w; ++i) timed.push_back({unit(rng), {StreamOp::kInsert, e}});
  }
  for (std::size_t i = 0; i < churn; ++i) {
    Hyperedge e = random_edge(rng, n, r_max);
    double t = unit(rng);
    timed.push_back({t, {StreamOp::kInsert, e}});
    timed.push_back({t + (1.0 - t) * unit(rng) + 1e-12, {StreamOp::kDelete, e}});
  }
  std::stable_sort(timed.begin(), timed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<StreamUpdate> out;
  out.reserve(timed.size());
  for (auto& [t, u] : timed) out.push_back(std::move(u));
  return out;
}

std::vector<EdgeMultiset> random_shards(std::mt19937_64& rng, const EdgeMultiset& edges, std::size_t k) {
  std::vector<EdgeMultiset> shards(k);
  for (const auto& [e, w] : edges) {
    for (Weight i = 0; i < w; ++i) shards[rng() % k][e] += 1;
  }
  return shards;
}

}  // namespace hypersketch
