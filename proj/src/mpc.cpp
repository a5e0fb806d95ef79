#include "hypersketch/mpc.hpp"

#include <algorithm>
#include <map>

#include "hypersketch/errors.hpp"
#include "hypersketch/parallel.hpp"

namespace hypersketch {

namespace {

using Held = std::map<Vertex, VertexFragment>;

class Cluster {
 public:
  Cluster(std::size_t machines, std::size_t alpha_limbs, std::size_t budget)
      : held_(machines), alpha_limbs_(alpha_limbs), budget_(budget) {}

  Held& held(std::size_t j) { return held_[j]; }
  std::size_t size() const { return held_.size(); }

  // Moves every fragment whose destination differs from its holder, checks
  // the budget, then lets receivers sum their inboxes concurrently.
  template <class Route>
  MpcRoundStats round(std::size_t number, Route route) {
    const std::size_t machines = held_.size();
    std::vector<std::vector<VertexFragment>> inbox(machines);
    std::vector<std::size_t> in_bytes(machines, 0), out_bytes(machines, 0), kept(machines, 0);
    MpcRoundStats stats;
    stats.round = number;
    for (std::size_t j = 0; j < machines; ++j) {
      for (auto it = held_[j].begin(); it != held_[j].end();) {
        std::size_t bytes = it->second.byte_size(alpha_limbs_);
        std::size_t dst = route(j, it->first);
        if (dst == j) {
          kept[j] += bytes;
          ++it;
          continue;
        }
        out_bytes[j] += bytes;
        in_bytes[dst] += bytes;
        stats.bytes_moved += bytes;
        ++stats.messages;
        inbox[dst].push_back(std::move(it->second));
        it = held_[j].erase(it);
      }
    }
    for (std::size_t j = 0; j < machines; ++j) {
      std::size_t used = kept[j] + std::max(in_bytes[j], out_bytes[j]);
      if (used > stats.peak_bytes) {
        stats.peak_bytes = used;
        stats.peak_machine = j;
      }
      if (used > budget_) throw BudgetExceeded(number, j, used, budget_);
    }
    parallel_for(machines, [&](std::size_t j) {
      for (auto& frag : inbox[j]) {
        auto [it, fresh] = held_[j].try_emplace(frag.vertex, std::move(frag));
        if (!fresh) fragment_accumulate(it->second, frag, alpha_limbs_);
      }
      std::erase_if(held_[j], [](const auto& kv) { return kv.second.slots.empty(); });
    });
    return stats;
  }

 private:
  std::vector<Held> held_;
  std::size_t alpha_limbs_;
  std::size_t budget_;
};

}  // namespace

std::size_t mpc_round_bound(std::size_t n, std::size_t m) {
  std::size_t rounds = 0;
  for (std::size_t reach = 1; reach < m; reach *= n) ++rounds;
  return std::max<std::size_t>(2, rounds);
}

MpcResult mpc_simulate(const std::vector<EdgeMultiset>& shards, const SketchConfig& config,
                       std::size_t memory_budget, bool decode) {
  config.validate();
  if (shards.empty()) throw InputError("mpc_simulate needs at least one shard");
  EdgeMultiset all;
  for (const auto& shard : shards) {
    for (const auto& [e, w] : shard) {
      if (e.max_vertex() >= config.n || e.arity() > config.r_max) {
        throw InputError("edge " + e.to_string() + " violates n or r_max");
      }
      all[e] += w;
    }
  }
  std::erase_if(all, [](const auto& kv) { return kv.second == 0; });
  if (all.size() > config.m_max) {
    throw InputError("shards hold " + std::to_string(all.size()) + " distinct edges, more than m_max=" +
                     std::to_string(config.m_max));
  }

  const std::size_t n = config.n;
  const std::size_t k = shards.size();
  const bool grouped = k >= n;
  const std::size_t group = grouped ? (k + n - 1) / n : 1;
  Cluster cluster(grouped ? n * group : k, config.alpha_limbs(), memory_budget);

  std::vector<std::vector<VertexFragment>> local(k);
  parallel_for(k, [&](std::size_t j) { local[j] = EncodedSketch::encode_fragments(config, shards[j]); });
  for (std::size_t j = 0; j < k; ++j) {
    for (auto& frag : local[j]) {
      Vertex v = frag.vertex;
      cluster.held(j).emplace(v, std::move(frag));
    }
  }
  local.clear();

  MpcResult result{EncodedSketch(config), std::nullopt, 0, 0, cluster.size(), {}};
  auto record = [&](MpcRoundStats stats) {
    result.peak_memory = std::max(result.peak_memory, stats.peak_bytes);
    result.per_round.push_back(stats);
    ++result.rounds;
  };

  if (grouped) {
    // Scatter: machine j sends vertex v to slot (j mod group) of v's group.
    record(cluster.round(1, [&](std::size_t j, Vertex v) { return v * group + j % group; }));
    // Tree sums inside each group with fan-in n.
    std::size_t span = 1;
    while (span < group) {
      std::size_t next = span * n;
      record(cluster.round(result.rounds + 1, [&](std::size_t j, Vertex v) {
        std::size_t pos = j - v * group;
        return v * group + pos / next * next;
      }));
      span = next;
    }
  } else {
    // Machine j owns vertices v with floor(v * k / n) == j.
    record(cluster.round(1, [&](std::size_t, Vertex v) { return std::size_t{v} * k / n; }));
  }
  record(cluster.round(result.rounds + 1, [](std::size_t, Vertex) { return std::size_t{0}; }));

  for (const auto& [v, frag] : cluster.held(0)) result.coordinator.add_fragment(frag);
  if (decode) result.sparsifier = sparsify(result.coordinator.bank, result.coordinator.conn, config);
  return result;
}

}  // namespace hypersketch
