#include "hypersketch/rational.hpp"

#include <charconv>

#include "hypersketch/errors.hpp"

namespace hypersketch {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InputError("not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 17) throw InputError("too many decimal places in '" + std::string(text) + "'");
    bool negative = !text.empty() && text[0] == '-';
    std::string_view int_part = text.substr(0, dot);
    std::int64_t whole = (int_part.empty() || int_part == "-") ? 0 : parse_int(int_part, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t f = frac.empty() ? 0 : parse_int(frac, text);
    if (f < 0) throw InputError("not a rational number: '" + std::string(text) + "'");
    std::int64_t magnitude = (whole < 0 ? -whole : whole) * scale + f;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_int(text, text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace hypersketch
