#include "sumlab/dynsys.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "parse_util.hpp"
#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

using Coords = std::span<std::uint64_t>;
using ConstCoords = std::span<const std::uint64_t>;

std::uint64_t mod_add(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) + b) % m);
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

/// n(n-1)/2 mod 2^64.
std::uint64_t triangular(std::uint64_t n) {
  if (n == 0) return 0;
  return (n % 2 == 0) ? (n / 2) * (n - 1) : n * ((n - 1) / 2);
}

void advance(const SystemSpec& system, Coords c, std::uint64_t n) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          auto size = static_cast<std::uint64_t>(v.size);
          c[0] = mod_add(c[0], mod_mul(n % size, static_cast<std::uint64_t>(v.step), size), size);
        } else if constexpr (std::is_same_v<V, TorusRotation>) {
          for (std::size_t i = 0; i < v.alpha.size(); ++i) c[i] += n * v.alpha[i];
        } else if constexpr (std::is_same_v<V, SkewProduct>) {
          auto x = c[0];
          c[0] = x + n * v.alpha;
          c[1] = c[1] + n * x + triangular(n) * v.alpha;
        } else {
          auto width = v.base->point_width();
          for (std::int64_t j = 0; j < v.copies; ++j) advance(*v.base, c.subspan(j * width, width), n);
        }
      },
      system.variant());
}

void step_once(const SystemSpec& system, Coords c) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          c[0] = mod_add(c[0], static_cast<std::uint64_t>(v.step), static_cast<std::uint64_t>(v.size));
        } else if constexpr (std::is_same_v<V, TorusRotation>) {
          for (std::size_t i = 0; i < v.alpha.size(); ++i) c[i] += v.alpha[i];
        } else if constexpr (std::is_same_v<V, SkewProduct>) {
          c[1] += c[0];
          c[0] += v.alpha;
        } else {
          auto width = v.base->point_width();
          for (std::int64_t j = 0; j < v.copies; ++j) step_once(*v.base, c.subspan(j * width, width));
        }
      },
      system.variant());
}

void step_back(const SystemSpec& system, Coords c) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          auto size = static_cast<std::uint64_t>(v.size);
          c[0] = mod_add(c[0], size - static_cast<std::uint64_t>(v.step), size);
        } else if constexpr (std::is_same_v<V, TorusRotation>) {
          for (std::size_t i = 0; i < v.alpha.size(); ++i) c[i] -= v.alpha[i];
        } else if constexpr (std::is_same_v<V, SkewProduct>) {
          c[0] -= v.alpha;
          c[1] -= c[0];
        } else {
          auto width = v.base->point_width();
          for (std::int64_t j = 0; j < v.copies; ++j) step_back(*v.base, c.subspan(j * width, width));
        }
      },
      system.variant());
}

/// Distance in raw units; finite rotations contribute 0 or 2^64 - 1.
double distance_coords(const SystemSpec& system, ConstCoords p, ConstCoords q) {
  return std::visit(
      [&](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          return p[0] == q[0] ? 0.0 : 1.0;
        } else if constexpr (std::is_same_v<V, ProductPower>) {
          auto width = v.base->point_width();
          double worst = 0.0;
          for (std::int64_t j = 0; j < v.copies; ++j) {
            worst = std::max(worst, distance_coords(*v.base, p.subspan(j * width, width),
                                                    q.subspan(j * width, width)));
          }
          return worst;
        } else {
          fixed::Raw worst = 0;
          for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, fixed::circular_gap(p[i], q[i]));
          return fixed::to_double(worst);
        }
      },
      system.variant());
}

}  // namespace

SystemSpec SystemSpec::finite_rotation(std::int64_t size, std::int64_t step) {
  if (size < 1) throw ValidationError("finite rotation size must be >= 1");
  auto reduced = ((step % size) + size) % size;
  return SystemSpec(FiniteRotation{size, reduced}, 1);
}

SystemSpec SystemSpec::torus_rotation(std::vector<fixed::Raw> alpha) {
  if (alpha.empty()) throw ValidationError("torus dimension must be >= 1");
  auto width = alpha.size();
  return SystemSpec(TorusRotation{std::move(alpha)}, width);
}

SystemSpec SystemSpec::skew_product(fixed::Raw alpha) { return SystemSpec(SkewProduct{alpha}, 2); }

SystemSpec SystemSpec::power(const SystemSpec& base, std::int64_t copies) {
  if (copies < 1 || !std::has_single_bit(static_cast<std::uint64_t>(copies))) {
    throw ValidationError("product power needs a power-of-two number of copies");
  }
  auto width = base.point_width() * static_cast<std::size_t>(copies);
  return SystemSpec(ProductPower{std::make_shared<const SystemSpec>(base), copies}, width);
}

bool SystemSpec::is_finite() const {
  if (as<FiniteRotation>()) return true;
  if (const auto* p = as<ProductPower>()) return p->base->is_finite();
  return false;
}

std::uint64_t SystemSpec::phase_space_size() const {
  if (const auto* f = as<FiniteRotation>()) return static_cast<std::uint64_t>(f->size);
  if (const auto* p = as<ProductPower>()) {
    auto base = p->base->phase_space_size();
    unsigned __int128 total = 1;
    for (std::int64_t j = 0; j < p->copies; ++j) {
      total *= base;
      if (total > ~std::uint64_t{0}) throw BoundExceeded("phase space size overflows 64 bits");
    }
    return static_cast<std::uint64_t>(total);
  }
  throw ValidationError("phase space of " + describe() + " is not finite");
}

std::string SystemSpec::describe() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          return "finrot:" + std::to_string(v.size) + ":" + std::to_string(v.step);
        } else if constexpr (std::is_same_v<V, TorusRotation>) {
          std::string out = "torus:" + std::to_string(v.alpha.size()) + ":";
          for (std::size_t i = 0; i < v.alpha.size(); ++i) {
            if (i) out += ",";
            out += fixed::to_string(v.alpha[i]);
          }
          return out;
        } else if constexpr (std::is_same_v<V, SkewProduct>) {
          return "skew:" + fixed::to_string(v.alpha);
        } else {
          return "power:" + v.base->describe() + "^" + std::to_string(v.copies);
        }
      },
      variant_);
}

void SystemSpec::validate(const SystemPoint& p) const {
  if (p.coords.size() != width_) {
    throw ValidationError("point has " + std::to_string(p.coords.size()) + " coordinates, system " +
                          describe() + " expects " + std::to_string(width_));
  }
  if (const auto* f = as<FiniteRotation>()) {
    if (p.coords[0] >= static_cast<std::uint64_t>(f->size)) {
      throw ValidationError("coordinate outside Z/" + std::to_string(f->size));
    }
  } else if (const auto* pw = as<ProductPower>()) {
    for (const auto& factor : split_point(p, static_cast<std::size_t>(pw->copies))) pw->base->validate(factor);
  }
}

SystemSpec parse_system_spec(std::string_view text) {
  text = detail::trim(text);
  if (text.starts_with("finrot:")) {
    auto parts = detail::split(text.substr(7), ':');
    if (parts.size() != 2) throw ParseError("finite rotation spec is finrot:<N>:<r>");
    auto size = detail::parse_int(parts[0], "rotation size");
    auto step = detail::parse_int(parts[1], "rotation step");
    if (size < 1) throw ParseError("rotation size must be >= 1");
    return SystemSpec::finite_rotation(size, step);
  }
  if (text.starts_with("torus:")) {
    auto body = text.substr(6);
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError("torus spec is torus:<d>:<a1,…>");
    auto d = detail::parse_int(body.substr(0, colon), "torus dimension");
    std::vector<fixed::Raw> alpha;
    for (auto piece : detail::split(body.substr(colon + 1), ',')) alpha.push_back(fixed::parse(piece));
    if (d < 1 || static_cast<std::size_t>(d) != alpha.size()) {
      throw ParseError("torus dimension does not match the rotation vector");
    }
    return SystemSpec::torus_rotation(std::move(alpha));
  }
  if (text.starts_with("skew:")) return SystemSpec::skew_product(fixed::parse(text.substr(5)));
  if (text.starts_with("power:")) {
    auto body = text.substr(6);
    auto caret = body.rfind('^');
    if (caret == std::string_view::npos) throw ParseError("power spec is power:<spec>^<copies>");
    auto copies = detail::parse_int(body.substr(caret + 1), "copies");
    auto base = parse_system_spec(body.substr(0, caret));
    try {
      return SystemSpec::power(base, copies);
    } catch (const ValidationError& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown system spec '" + std::string(text) + "'");
}

namespace {

void parse_coords(const SystemSpec& system, std::span<const std::string_view> pieces,
                  std::vector<std::uint64_t>& out) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          auto value = detail::parse_int(pieces[0], "coordinate");
          if (value < 0 || value >= v.size) throw ParseError("coordinate outside Z/" + std::to_string(v.size));
          out.push_back(static_cast<std::uint64_t>(value));
        } else if constexpr (std::is_same_v<V, ProductPower>) {
          auto width = v.base->point_width();
          for (std::int64_t j = 0; j < v.copies; ++j) parse_coords(*v.base, pieces.subspan(j * width, width), out);
        } else {
          for (auto piece : pieces) out.push_back(fixed::parse(piece));
        }
      },
      system.variant());
}

void format_coords(const SystemSpec& system, ConstCoords c, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        auto emit = [&out](const std::string& s) {
          if (!out.empty()) out += ",";
          out += s;
        };
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          emit(std::to_string(c[0]));
        } else if constexpr (std::is_same_v<V, ProductPower>) {
          auto width = v.base->point_width();
          for (std::int64_t j = 0; j < v.copies; ++j) format_coords(*v.base, c.subspan(j * width, width), out);
        } else {
          for (auto x : c) emit(fixed::to_string(x));
        }
      },
      system.variant());
}

}  // namespace

SystemPoint parse_point(const SystemSpec& system, std::string_view text) {
  auto pieces = detail::split(detail::trim(text), ',');
  if (pieces.size() != system.point_width()) {
    throw ParseError("point '" + std::string(text) + "' needs " + std::to_string(system.point_width()) +
                     " coordinates for " + system.describe());
  }
  SystemPoint p;
  parse_coords(system, pieces, p.coords);
  return p;
}

std::string format_point(const SystemSpec& system, const SystemPoint& p) {
  system.validate(p);
  std::string out;
  format_coords(system, p.coords, out);
  return out;
}

SystemPoint concat_points(std::span<const SystemPoint> factors) {
  SystemPoint out;
  for (const auto& f : factors) out.coords.insert(out.coords.end(), f.coords.begin(), f.coords.end());
  return out;
}

std::vector<SystemPoint> split_point(const SystemPoint& p, std::size_t copies) {
  if (copies == 0 || p.coords.size() % copies != 0) throw ValidationError("point does not split evenly");
  auto width = p.coords.size() / copies;
  std::vector<SystemPoint> out(copies);
  for (std::size_t j = 0; j < copies; ++j) {
    out[j].coords.assign(p.coords.begin() + static_cast<std::ptrdiff_t>(j * width),
                         p.coords.begin() + static_cast<std::ptrdiff_t>((j + 1) * width));
  }
  return out;
}

SystemPoint step(const SystemSpec& system, const SystemPoint& p) {
  system.validate(p);
  SystemPoint out = p;
  step_once(system, out.coords);
  return out;
}

SystemPoint step_inverse(const SystemSpec& system, const SystemPoint& p) {
  system.validate(p);
  SystemPoint out = p;
  step_back(system, out.coords);
  return out;
}

SystemPoint iterate(const SystemSpec& system, const SystemPoint& p, std::uint64_t n) {
  system.validate(p);
  SystemPoint out = p;
  advance(system, out.coords, n);
  return out;
}

double distance(const SystemSpec& system, const SystemPoint& p, const SystemPoint& q) {
  system.validate(p);
  system.validate(q);
  return distance_coords(system, p.coords, q.coords);
}

namespace {

template <class OnHit>
void scan_orbit(const SystemSpec& system, const SystemPoint& start, const SystemPoint& target, double eps,
                std::int64_t horizon, OnHit&& on_hit) {
  if (!(eps > 0)) throw ValidationError("eps must be positive");
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  system.validate(start);
  system.validate(target);
  std::vector<std::uint64_t> current = start.coords;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    step_once(system, current);
    if (distance_coords(system, current, target.coords) < eps) {
      if (!on_hit(n)) return;
    }
  }
}

}  // namespace

std::vector<std::int64_t> orbit_hits(const SystemSpec& system, const SystemPoint& start,
                                     const SystemPoint& target, double eps, std::int64_t horizon) {
  std::vector<std::int64_t> hits;
  scan_orbit(system, start, target, eps, horizon, [&](std::int64_t n) {
    hits.push_back(n);
    return true;
  });
  return hits;
}

OmegaVerdict omega_member_approx(const SystemSpec& system, const SystemPoint& start,
                                 const SystemPoint& target, double eps, std::int64_t horizon,
                                 std::int64_t min_hits) {
  if (min_hits < 1) throw ValidationError("min_hits must be >= 1");
  OmegaVerdict verdict{false, {}, eps, horizon, min_hits};
  scan_orbit(system, start, target, eps, horizon, [&](std::int64_t n) {
    verdict.witnesses.push_back(n);
    return static_cast<std::int64_t>(verdict.witnesses.size()) < min_hits;
  });
  verdict.member = static_cast<std::int64_t>(verdict.witnesses.size()) >= min_hits;
  return verdict;
}

}  // namespace sumlab
