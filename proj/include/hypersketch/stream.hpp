#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hypersketch/config.hpp"
#include "hypersketch/hypergraph.hpp"
#include "hypersketch/incidence.hpp"

namespace hypersketch {

enum class StreamOp { kInsert, kDelete };

struct StreamUpdate {
  StreamOp op = StreamOp::kInsert;
  Hyperedge edge;
};

struct Stream {
  std::size_t n = 0;
  std::size_t r_max = 0;
  std::vector<StreamUpdate> updates;
};

// Header "n <n> r <r_max>", then "+ v1,v2,... [count]" or "- v1,v2,... [count]".
Stream parse_stream(const std::string& text, const std::string& source = "<stream>");
std::string format_stream(const Stream& stream);

// Running edge multiset of a stream. Strict mode rejects deletions of absent
// edges; lenient mode lets multiplicities go negative.
class MultisetTracker {
 public:
  explicit MultisetTracker(bool strict) : strict_(strict) {}
  void apply(const StreamUpdate& u, std::size_t index);
  // Nonzero multiplicities only.
  const EdgeMultiset& multiset() const { return counts_; }

 private:
  bool strict_;
  EdgeMultiset counts_;
};

// Encodes every update into fresh banks. Throws InputError for arity or
// range violations, strict-mode negative multiplicities, or a final
// multiset with more than m_max distinct edges.
EncodedSketch stream_encode(std::span<const StreamUpdate> updates, const SketchConfig& config);

// The final multiset after validation, as stream_encode would see it.
EdgeMultiset final_multiset(std::span<const StreamUpdate> updates, const SketchConfig& config);

}  // namespace hypersketch
