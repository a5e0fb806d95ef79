#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace hypersketch {

using Rational = boost::rational<std::int64_t>;

// Accepts "a", "a/b" and finite decimals such as "0.5".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace hypersketch
