#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "hypersketch/hypergraph.hpp"
#include "hypersketch/rational.hpp"

namespace hypersketch {

// Whitespace tokenizer for one line of a text file. Every failure throws a
// ParseError carrying the 1-based line and column.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::string source, std::size_t lineno)
      : line_(line), source_(std::move(source)), lineno_(lineno) {}

  // True if only whitespace or a '#' comment remains.
  bool at_end_or_comment();
  std::string word();
  std::size_t unsigned_number();
  Rational rational();
  // Comma-separated vertex list, each vertex < n.
  Hyperedge edge(std::size_t n);
  void expect_end();
  [[noreturn]] void fail(const std::string& message, std::size_t column = 0) const;

 private:
  std::string_view token();

  std::string_view line_;
  std::string source_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
  std::size_t token_start_ = 0;
};

// Header "n <n> r <r_max>" then lines "+ v1,v2,... [weight]".
Hypergraph parse_hypergraph(const std::string& text, const std::string& source = "<hypergraph>");
std::string format_hypergraph(const Hypergraph& h);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hypersketch
