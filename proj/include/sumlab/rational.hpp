#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace sumlab {

using Rational = boost::rational<std::int64_t>;

/// "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& r);

/// Parses "p/q" or "p".
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace sumlab
