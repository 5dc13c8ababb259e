#include "sumlab/correspondence.hpp"

#include <cstdlib>

#include "parse_util.hpp"
#include "sumlab/errors.hpp"

namespace sumlab {

SymbolicPoint::SymbolicPoint(std::int64_t radius, std::vector<std::uint8_t> bits)
    : radius_(radius), bits_(std::move(bits)) {
  if (radius_ < 0) throw ValidationError("symbolic point radius must be >= 0");
  if (static_cast<std::int64_t>(bits_.size()) != 2 * radius_ + 1) {
    throw ValidationError("symbolic point needs exactly 2W+1 bits");
  }
  for (auto b : bits_) {
    if (b > 1) throw ValidationError("symbolic point bits must be 0 or 1");
  }
}

std::uint8_t SymbolicPoint::at(std::int64_t m) const {
  if (!readable(m)) {
    throw WindowOverflow("coordinate " + std::to_string(m) + " outside known window [" +
                         std::to_string(-radius_) + ", " + std::to_string(radius_) + "]");
  }
  return bits_[static_cast<std::size_t>(m + radius_)];
}

Correspondence build_correspondence(const IntegerSet& set, std::int64_t radius) {
  if (radius < 1) throw ValidationError("correspondence radius must be >= 1");
  if (!set.covers({0, radius + 1})) {
    throw WindowOverflow("radius " + std::to_string(radius) + " exceeds set window " +
                         std::to_string(set.window_size()));
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(2 * radius + 1), 0);
  for (std::int64_t n = 0; n <= radius; ++n) {
    bits[static_cast<std::size_t>(n + radius)] = set.contains(n) ? 1 : 0;
  }
  return {SymbolicPoint(radius, std::move(bits)), CylinderSet{0, 1}};
}

SymbolicPoint shift(const SymbolicPoint& point, std::int64_t n) {
  auto slack = point.radius() - std::llabs(n);
  if (slack < 0) {
    throw WindowOverflow("shift by " + std::to_string(n) + " exceeds radius " +
                         std::to_string(point.radius()));
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(2 * slack + 1));
  for (auto m = -slack; m <= slack; ++m) bits.push_back(point.at(m + n));
  return SymbolicPoint(slack, std::move(bits));
}

namespace {

void require_readable(const SymbolicPoint& point, const Interval& window,
                      const CylinderSet& cylinder) {
  if (window.length() < 1) throw ValidationError("empty frequency window");
  if (!point.readable(window.lo + cylinder.coordinate) ||
      !point.readable(window.hi - 1 + cylinder.coordinate)) {
    throw WindowOverflow("window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                         ") leaves the readable range of the point");
  }
}

}  // namespace

Rational empirical_frequency(const SymbolicPoint& point, const Interval& window,
                             const CylinderSet& cylinder) {
  require_readable(point, window, cylinder);
  std::int64_t hits = 0;
  for (auto n = window.lo; n < window.hi; ++n) {
    if (point.at(n + cylinder.coordinate) == cylinder.bit) ++hits;
  }
  return {hits, window.length()};
}

IntegerSet reconstruct(const SymbolicPoint& point, const CylinderSet& cylinder,
                       const Interval& window) {
  require_readable(point, window, cylinder);
  if (window.lo < 0) throw ValidationError("reconstruction window must lie in the naturals");
  Bits bits(static_cast<std::size_t>(window.hi));
  for (auto n = window.lo; n < window.hi; ++n) {
    if (point.at(n + cylinder.coordinate) == cylinder.bit) bits.set(static_cast<std::size_t>(n));
  }
  return IntegerSet::from_bits(std::move(bits));
}

std::string serialize(const SymbolicPoint& point) {
  std::string out = "bits:";
  for (auto b : point.bits()) out.push_back(b ? '1' : '0');
  out += "@origin=" + std::to_string(point.origin());
  return out;
}

SymbolicPoint parse_symbolic_point(std::string_view text) {
  text = detail::trim(text);
  constexpr std::string_view kPrefix = "bits:";
  constexpr std::string_view kOrigin = "@origin=";
  if (!text.starts_with(kPrefix)) throw ParseError("symbolic point must start with 'bits:'");
  auto at = text.find(kOrigin);
  if (at == std::string_view::npos) throw ParseError("symbolic point needs '@origin=<-W>'");
  auto body = text.substr(kPrefix.size(), at - kPrefix.size());
  auto origin = detail::parse_int(text.substr(at + kOrigin.size()), "origin");
  std::vector<std::uint8_t> bits;
  for (char c : body) {
    if (c != '0' && c != '1') throw ParseError("symbolic point bits must be 0/1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  if (origin > 0 || static_cast<std::int64_t>(bits.size()) != 1 - 2 * origin) {
    throw ParseError("origin must be -W for a string of 2W+1 bits");
  }
  return SymbolicPoint(-origin, std::move(bits));
}

}  // namespace sumlab
