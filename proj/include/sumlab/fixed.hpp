#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sumlab::fixed {

/// A point of the circle R/Z stored as raw / 2^64. Addition and integer
/// multiples wrap mod 1 exactly through unsigned overflow.
using Raw = std::uint64_t;

/// floor(frac(p/q) * 2^64) for decimal strings p, q of any length.
Raw from_fraction(std::string_view numerator, std::string_view denominator);

/// Accepts "p/q", a decimal such as "0.6180339887", or "golden" for
/// (sqrt(5) - 1) / 2. Integer parts are discarded and the value truncated.
Raw parse(std::string_view text);

/// (sqrt(5) - 1) / 2 truncated to 64 fractional bits.
Raw golden_conjugate();

/// Exact reduced dyadic fraction "p/q" ("0" for zero).
std::string to_string(Raw x);

inline double to_double(Raw x) { return static_cast<double>(x) * 0x1p-64; }

/// Nearest fixed-point value below `x`, for x in [0, 1].
Raw from_double(double x);

/// min(|u − v|, 1 − |u − v|) on the circle, as a raw value.
inline Raw circular_gap(Raw u, Raw v) {
  Raw forward = u - v;
  Raw backward = v - u;
  return forward < backward ? forward : backward;
}

inline double circular_distance(Raw u, Raw v) { return to_double(circular_gap(u, v)); }

}  // namespace sumlab::fixed
