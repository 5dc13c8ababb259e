#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "sumlab/rational.hpp"

namespace sumlab {

using Bits = boost::dynamic_bitset<std::uint64_t>;

/// Nominal window attached to periodic sets when none is given.
inline constexpr std::int64_t kDefaultPeriodicWindow = 10'000;

/// Half-open integer interval [lo, hi).
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t length() const { return hi - lo; }
  bool contains(std::int64_t n) const { return lo <= n && n < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A subset of the naturals known on a finite window [0, N).
///
/// Bitsets reject queries at or beyond N. Periodic sets answer for every
/// n >= 0; their window is nominal and only consumed by callers that need a
/// finite search range (the sumset searches). A union is bounded as soon as
/// one of its parts is, and is known on the smallest bounded window.
class IntegerSet {
 public:
  static IntegerSet from_bits(Bits members);
  static IntegerSet from_members(std::span<const std::int64_t> members, std::int64_t window);
  static IntegerSet periodic(std::int64_t modulus, std::vector<std::int64_t> residues,
                             std::int64_t window = kDefaultPeriodicWindow);
  static IntegerSet union_of(std::vector<IntegerSet> parts);

  /// Throws WindowOverflow for n outside a bounded window, ValidationError for n < 0.
  bool contains(std::int64_t n) const;

  std::int64_t window_size() const { return window_; }
  bool bounded() const { return bounded_; }

  /// True when every n in `range` can be queried.
  bool covers(const Interval& range) const;

  std::int64_t count_in(const Interval& range) const;
  std::vector<std::int64_t> members_in(const Interval& range) const;

  /// Membership of [0, length) as a bitset; throws WindowOverflow if length
  /// exceeds a bounded window.
  Bits to_bits(std::int64_t length) const;

 private:
  struct Explicit {
    Bits bits;
  };
  struct Periodic {
    std::int64_t modulus;
    std::vector<std::int64_t> residues;
    Bits residue_mask;
  };
  struct Union {
    std::shared_ptr<const std::vector<IntegerSet>> parts;
  };

  IntegerSet(std::variant<Explicit, Periodic, Union> rep, std::int64_t window, bool bounded)
      : rep_(std::move(rep)), window_(window), bounded_(bounded) {}

  bool contains_unchecked(std::int64_t n) const;

  std::variant<Explicit, Periodic, Union> rep_;
  std::int64_t window_;
  bool bounded_;
};

/// Finite prefix of a Følner sequence of intervals with strictly growing
/// lengths.
class FolnerWindowFamily {
 public:
  explicit FolnerWindowFamily(std::vector<Interval> windows);

  const std::vector<Interval>& windows() const { return windows_; }
  std::size_t size() const { return windows_.size(); }

 private:
  std::vector<Interval> windows_;
};

struct DensityReport {
  std::vector<Rational> values;
  Rational estimate;
  /// Set when the per-window values are neither non-increasing nor
  /// non-decreasing.
  bool non_monotone = false;
};

/// |A ∩ Φ_j| / |Φ_j| for every window. Throws WindowOverflow when a window
/// leaves the set's window of definition.
DensityReport density_along(const IntegerSet& set, const FolnerWindowFamily& windows);

/// |(Φ_j − t) ∩ Φ_j| / |Φ_j| for every window.
std::vector<Rational> folner_defect(const FolnerWindowFamily& windows, std::int64_t t);

/// Set DSL: `periodic:<m>:<r1,r2,…>[@N]`, `list:<n1,n2,…>@<N>`,
/// `file:<path>@<N>`, `union(<spec>;<spec>;…)`.
IntegerSet parse_set_spec(std::string_view spec);

/// Window DSL: `intervals:<L1>-<M1>,<L2>-<M2>,…`.
FolnerWindowFamily parse_window_spec(std::string_view spec);

}  // namespace sumlab
