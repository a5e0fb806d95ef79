#include "hypersketch/text_format.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hypersketch/errors.hpp"

namespace hypersketch {

bool LineScanner::at_end_or_comment() {
  while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  return pos_ == line_.size() || line_[pos_] == '#';
}

std::string_view LineScanner::token() {
  if (at_end_or_comment()) {
    token_start_ = pos_;
    fail("unexpected end of line", pos_ + 1);
  }
  token_start_ = pos_;
  while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) && line_[pos_] != '#') ++pos_;
  return line_.substr(token_start_, pos_ - token_start_);
}

std::string LineScanner::word() { return std::string(token()); }

std::size_t LineScanner::unsigned_number() {
  auto t = token();
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) fail("expected a nonnegative integer, got '" + std::string(t) + "'");
  return value;
}

Rational LineScanner::rational() {
  auto t = token();
  try {
    return parse_rational(t);
  } catch (const InputError&) {
    fail("expected a rational number, got '" + std::string(t) + "'");
  }
}

Hyperedge LineScanner::edge(std::size_t n) {
  auto t = token();
  std::vector<Vertex> vs;
  std::size_t start = 0;
  while (start <= t.size()) {
    std::size_t comma = t.find(',', start);
    if (comma == std::string_view::npos) comma = t.size();
    auto part = t.substr(start, comma - start);
    std::size_t column = token_start_ + start + 1;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      fail("expected a vertex id, got '" + std::string(part) + "'", column);
    }
    if (v >= n) fail("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n), column);
    for (Vertex u : vs) {
      if (u == v) fail("vertex " + std::to_string(v) + " repeated in edge", column);
    }
    vs.push_back(static_cast<Vertex>(v));
    start = comma + 1;
  }
  if (vs.size() < 2) fail("an edge needs at least two vertices", token_start_ + 1);
  return Hyperedge(std::move(vs));
}

void LineScanner::expect_end() {
  if (!at_end_or_comment()) fail("unexpected trailing text", pos_ + 1);
}

void LineScanner::fail(const std::string& message, std::size_t column) const {
  throw ParseError(source_, lineno_, column == 0 ? token_start_ + 1 : column, message);
}

Hypergraph parse_hypergraph(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  Hypergraph h;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    LineScanner scan(line, source, lineno);
    if (scan.at_end_or_comment()) continue;
    if (!have_header) {
      if (scan.word() != "n") scan.fail("expected header 'n <n> r <r_max>'");
      std::size_t n = scan.unsigned_number();
      if (scan.word() != "r") scan.fail("expected 'r' in header");
      std::size_t r = scan.unsigned_number();
      scan.expect_end();
      if (n < 1) scan.fail("n must be positive", 3);
      if (r < 2) scan.fail("r must be at least 2");
      h = Hypergraph(n, r);
      have_header = true;
      continue;
    }
    std::string op = scan.word();
    if (op != "+") scan.fail("expected '+' at the start of an edge line");
    Hyperedge e = scan.edge(h.n());
    if (e.arity() > h.r_max()) scan.fail("edge arity " + std::to_string(e.arity()) + " exceeds r=" + std::to_string(h.r_max()));
    Weight w = 1;
    if (!scan.at_end_or_comment()) {
      w = static_cast<Weight>(scan.unsigned_number());
      if (w < 1) scan.fail("edge weight must be positive");
    }
    scan.expect_end();
    h.add_edge(e, w);
  }
  if (!have_header) throw ParseError(source, lineno == 0 ? 1 : lineno, 1, "missing header 'n <n> r <r_max>'");
  return h;
}

std::string format_hypergraph(const Hypergraph& h) {
  std::ostringstream out;
  std::size_t r = h.r_max();
  if (r == 0) {
    r = 2;
    for (const auto& [e, w] : h.edges()) r = std::max(r, e.arity());
  }
  out << "n " << h.n() << " r " << r << "\n";
  for (const auto& [e, w] : h.edges()) {
    out << "+ " << e.to_string();
    if (w != 1) out << " " << w;
    out << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace hypersketch
