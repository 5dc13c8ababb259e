#include "sumlab/rational.hpp"

#include "parse_util.hpp"

namespace sumlab {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  text = detail::trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_int(text, "rational"));
  auto num = detail::parse_int(text.substr(0, slash), "numerator");
  auto den = detail::parse_int(text.substr(slash + 1), "denominator");
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace sumlab
