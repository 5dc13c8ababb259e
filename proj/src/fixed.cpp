#include "sumlab/fixed.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "parse_util.hpp"
#include "sumlab/errors.hpp"

namespace sumlab::fixed {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_digits(std::string_view digits, std::string_view what) {
  digits = detail::trim(digits);
  if (digits.empty()) throw ParseError("empty " + std::string(what));
  cpp_int value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw ParseError("invalid " + std::string(what) + ": '" + std::string(digits) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

Raw scale_to_raw(const cpp_int& numerator, const cpp_int& denominator) {
  cpp_int reduced = numerator % denominator;
  cpp_int scaled = (reduced << 64) / denominator;
  return scaled.convert_to<Raw>();
}

}  // namespace

Raw from_fraction(std::string_view numerator, std::string_view denominator) {
  auto p = parse_digits(numerator, "numerator");
  auto q = parse_digits(denominator, "denominator");
  if (q == 0) throw ParseError("zero denominator");
  return scale_to_raw(p, q);
}

Raw golden_conjugate() {
  // floor(sqrt(5) * 2^64) = isqrt(5 * 2^128); halving after subtracting 2^64
  // keeps the floor exact.
  cpp_int s = boost::multiprecision::sqrt(cpp_int(5) << 128);
  cpp_int raw = (s - (cpp_int(1) << 64)) >> 1;
  return raw.convert_to<Raw>();
}

Raw parse(std::string_view text) {
  text = detail::trim(text);
  if (text == "golden") return golden_conjugate();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return from_fraction(text.substr(0, slash), text.substr(slash + 1));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    parse_digits(text, "coordinate");
    return 0;
  }
  auto integer_part = text.substr(0, dot);
  if (!integer_part.empty()) parse_digits(integer_part, "coordinate");
  auto fraction = text.substr(dot + 1);
  if (fraction.empty()) return 0;
  auto digits = parse_digits(fraction, "coordinate");
  cpp_int denominator = 1;
  for (std::size_t i = 0; i < fraction.size(); ++i) denominator *= 10;
  return scale_to_raw(digits, denominator);
}

std::string to_string(Raw x) {
  if (x == 0) return "0";
  int shift = 0;
  while ((x & 1u) == 0) {
    x >>= 1;
    ++shift;
  }
  cpp_int denominator = cpp_int(1) << (64 - shift);
  return std::to_string(x) + "/" + denominator.str();
}

Raw from_double(double x) {
  if (!(x >= 0.0) || x > 1.0) throw ValidationError("circle coordinate must lie in [0, 1]");
  if (x >= 1.0) return ~Raw{0};
  return static_cast<Raw>(std::ldexp(x, 64));
}

}  // namespace sumlab::fixed
