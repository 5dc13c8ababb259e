#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sumlab/fixed.hpp"

namespace sumlab {

/// Coordinates of a point, flattened. Integers mod N for finite rotations,
/// raw fixed-point circle values for torus variants, and the concatenation
/// of the factors' coordinates for product powers.
struct SystemPoint {
  std::vector<std::uint64_t> coords;

  friend auto operator<=>(const SystemPoint&, const SystemPoint&) = default;
  friend bool operator==(const SystemPoint&, const SystemPoint&) = default;
};

class SystemSpec;

/// x ↦ x + step on Z/size.
struct FiniteRotation {
  std::int64_t size = 1;
  std::int64_t step = 0;
};

/// x ↦ x + alpha on the d-torus, d = alpha.size().
struct TorusRotation {
  std::vector<fixed::Raw> alpha;
};

/// (x, y) ↦ (x + alpha, y + x) on the 2-torus.
struct SkewProduct {
  fixed::Raw alpha = 0;
};

/// The base map applied to each of `copies` coordinates.
struct ProductPower {
  std::shared_ptr<const SystemSpec> base;
  std::int64_t copies = 1;
};

class SystemSpec {
 public:
  using Variant = std::variant<FiniteRotation, TorusRotation, SkewProduct, ProductPower>;

  static SystemSpec finite_rotation(std::int64_t size, std::int64_t step);
  static SystemSpec torus_rotation(std::vector<fixed::Raw> alpha);
  static SystemSpec skew_product(fixed::Raw alpha);
  /// `copies` must be a power of two.
  static SystemSpec power(const SystemSpec& base, std::int64_t copies);

  const Variant& variant() const { return variant_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&variant_);
  }

  /// Number of flattened coordinates in a point.
  std::size_t point_width() const { return width_; }

  /// True for finite rotations and powers of them.
  bool is_finite() const;
  /// Number of points; throws ValidationError for non-finite systems and
  /// BoundExceeded when the count overflows 64 bits.
  std::uint64_t phase_space_size() const;

  /// Canonical DSL text.
  std::string describe() const;

  /// Throws ValidationError when `p` is not a point of this system.
  void validate(const SystemPoint& p) const;

  friend bool operator==(const SystemSpec& a, const SystemSpec& b) { return a.describe() == b.describe(); }

 private:
  SystemSpec(Variant v, std::size_t width) : variant_(std::move(v)), width_(width) {}

  Variant variant_;
  std::size_t width_;
};

/// DSL: `finrot:<N>:<r>`, `torus:<d>:<a1,a2,…>`, `skew:<alpha>`,
/// `power:<spec>^<copies>`.
SystemSpec parse_system_spec(std::string_view text);

/// Comma-separated canonical coordinates.
SystemPoint parse_point(const SystemSpec& system, std::string_view text);
std::string format_point(const SystemSpec& system, const SystemPoint& p);

/// Builds a point of `ProductPower` from its factors.
SystemPoint concat_points(std::span<const SystemPoint> factors);
/// Splits a point of a power into `copies` factors of width `width`.
std::vector<SystemPoint> split_point(const SystemPoint& p, std::size_t copies);

SystemPoint step(const SystemSpec& system, const SystemPoint& p);
SystemPoint step_inverse(const SystemSpec& system, const SystemPoint& p);
/// T^n(p), evaluated in closed form.
SystemPoint iterate(const SystemSpec& system, const SystemPoint& p, std::uint64_t n);

/// 0/1 metric on finite rotations, sup of circular distances on tori,
/// max over factors for powers.
double distance(const SystemSpec& system, const SystemPoint& p, const SystemPoint& q);

/// All n in [1, horizon] with distance(T^n start, target) < eps, increasing.
std::vector<std::int64_t> orbit_hits(const SystemSpec& system, const SystemPoint& start,
                                     const SystemPoint& target, double eps, std::int64_t horizon);

/// Approximate forward recurrence verdict: target counts as an ω-limit
/// point of start when the orbit enters the eps-ball at least min_hits
/// times within the horizon. The parameters travel with the verdict.
struct OmegaVerdict {
  bool member = false;
  std::vector<std::int64_t> witnesses;
  double eps = 0;
  std::int64_t horizon = 0;
  std::int64_t min_hits = 0;
};

OmegaVerdict omega_member_approx(const SystemSpec& system, const SystemPoint& start,
                                 const SystemPoint& target, double eps, std::int64_t horizon,
                                 std::int64_t min_hits);

}  // namespace sumlab
