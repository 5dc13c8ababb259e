#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sumlab/rational.hpp"
#include "sumlab/setspec.hpp"

namespace sumlab {

/// A point of {0,1}^Z known on the coordinates [-radius, radius].
class SymbolicPoint {
 public:
  /// `bits` lists coordinates -radius..radius in order; its size must be
  /// 2 * radius + 1.
  SymbolicPoint(std::int64_t radius, std::vector<std::uint8_t> bits);

  std::int64_t radius() const { return radius_; }
  std::int64_t origin() const { return -radius_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool readable(std::int64_t m) const { return -radius_ <= m && m <= radius_; }
  /// Throws WindowOverflow outside [-radius, radius].
  std::uint8_t at(std::int64_t m) const;

  friend bool operator==(const SymbolicPoint&, const SymbolicPoint&) = default;

 private:
  std::int64_t radius_;
  std::vector<std::uint8_t> bits_;
};

/// {x : x(coordinate) = bit}.
struct CylinderSet {
  std::int64_t coordinate = 0;
  std::uint8_t bit = 1;

  bool contains(const SymbolicPoint& x) const { return x.at(coordinate) == bit; }
};

struct Correspondence {
  SymbolicPoint point;
  CylinderSet cylinder;
};

/// a(n) = 1 iff n ∈ A for 0 <= n <= W, and 0 for negative n; E = {x(0) = 1}.
Correspondence build_correspondence(const IntegerSet& set, std::int64_t radius);

/// T^n a, with (T^n a)(m) = a(m + n). The radius shrinks by |n|.
SymbolicPoint shift(const SymbolicPoint& point, std::int64_t n);

/// #{n ∈ window : T^n a ∈ E} / |window|.
Rational empirical_frequency(const SymbolicPoint& point, const Interval& window,
                             const CylinderSet& cylinder);

/// {n ∈ window : T^n a ∈ E} as a bitset over [0, window.hi).
IntegerSet reconstruct(const SymbolicPoint& point, const CylinderSet& cylinder,
                       const Interval& window);

/// `bits:<0/1 string>@origin=<-W>`
std::string serialize(const SymbolicPoint& point);
SymbolicPoint parse_symbolic_point(std::string_view text);

}  // namespace sumlab
