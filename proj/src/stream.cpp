#include "hypersketch/stream.hpp"

#include <sstream>

#include "hypersketch/errors.hpp"
#include "hypersketch/text_format.hpp"

namespace hypersketch {

Stream parse_stream(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  Stream out;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    LineScanner scan(line, source, lineno);
    if (scan.at_end_or_comment()) continue;
    if (!have_header) {
      if (scan.word() != "n") scan.fail("expected header 'n <n> r <r_max>'");
      out.n = scan.unsigned_number();
      if (scan.word() != "r") scan.fail("expected 'r' in header");
      out.r_max = scan.unsigned_number();
      scan.expect_end();
      if (out.n < 1) scan.fail("n must be positive", 3);
      if (out.r_max < 2) scan.fail("r must be at least 2");
      have_header = true;
      continue;
    }
    std::string op = scan.word();
    StreamOp kind;
    if (op == "+") kind = StreamOp::kInsert;
    else if (op == "-") kind = StreamOp::kDelete;
    else scan.fail("expected '+' or '-' at the start of an update line");
    Hyperedge e = scan.edge(out.n);
    if (e.arity() > out.r_max) {
      scan.fail("edge arity " + std::to_string(e.arity()) + " exceeds r=" + std::to_string(out.r_max));
    }
    std::size_t count = 1;
    if (!scan.at_end_or_comment()) {
      count = scan.unsigned_number();
      if (count < 1) scan.fail("repeat count must be positive");
    }
    scan.expect_end();
    for (std::size_t i = 0; i < count; ++i) out.updates.push_back({kind, e});
  }
  if (!have_header) throw ParseError(source, lineno == 0 ? 1 : lineno, 1, "missing header 'n <n> r <r_max>'");
  return out;
}

std::string format_stream(const Stream& stream) {
  std::ostringstream out;
  out << "n " << stream.n << " r " << stream.r_max << "\n";
  for (const auto& u : stream.updates) {
    out << (u.op == StreamOp::kInsert ? "+ " : "- ") << u.edge.to_string() << "\n";
  }
  return out.str();
}

void MultisetTracker::apply(const StreamUpdate& u, std::size_t index) {
  Weight& count = counts_[u.edge];
  if (u.op == StreamOp::kInsert) {
    ++count;
  } else {
    if (strict_ && count <= 0) {
      counts_.erase(u.edge);
      throw InputError("update " + std::to_string(index + 1) + " deletes edge " + u.edge.to_string() +
                       " which is not present");
    }
    --count;
  }
  if (count == 0) counts_.erase(u.edge);
}

EdgeMultiset final_multiset(std::span<const StreamUpdate> updates, const SketchConfig& config) {
  MultisetTracker tracker(config.strict);
  for (std::size_t i = 0; i < updates.size(); ++i) {
    const auto& e = updates[i].edge;
    if (e.max_vertex() >= config.n) {
      throw InputError("update " + std::to_string(i + 1) + ": edge " + e.to_string() + " out of range");
    }
    if (e.arity() > config.r_max) {
      throw InputError("update " + std::to_string(i + 1) + ": edge " + e.to_string() + " exceeds r_max");
    }
    tracker.apply(updates[i], i);
  }
  if (tracker.multiset().size() > config.m_max) {
    throw InputError("stream ends with " + std::to_string(tracker.multiset().size()) +
                     " distinct edges, more than m_max=" + std::to_string(config.m_max));
  }
  return tracker.multiset();
}

EncodedSketch stream_encode(std::span<const StreamUpdate> updates, const SketchConfig& config) {
  final_multiset(updates, config);
  EncodedSketch sketch(config);
  for (const auto& u : updates) sketch.update(u.edge, u.op == StreamOp::kInsert ? 1 : -1);
  return sketch;
}

}  // namespace hypersketch
