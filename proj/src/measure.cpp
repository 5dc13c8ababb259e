#include "sumlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sumlab/errors.hpp"

namespace sumlab {

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<std::pair<SystemPoint, Rational>> atoms) {
  MixtureBuilder builder(std::max<std::size_t>(atoms.size(), 1));
  for (auto& [p, w] : atoms) {
    if (w <= Rational(0)) throw ValidationError("measure weights must be positive");
    builder.add_atom(p, w);
  }
  return std::move(builder).finish();
}

DiscreteMeasure DiscreteMeasure::dirac(SystemPoint p) {
  AtomMap atoms;
  atoms.emplace(std::move(p), Rational(1));
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::uniform(const std::vector<SystemPoint>& points) {
  if (points.empty()) throw ValidationError("uniform measure on an empty set");
  Rational w(1, static_cast<std::int64_t>(points.size()));
  AtomMap atoms;
  for (const auto& p : points) {
    if (!atoms.emplace(p, w).second) throw ValidationError("uniform measure support has repeated points");
  }
  return DiscreteMeasure(std::move(atoms));
}

Rational DiscreteMeasure::weight(const SystemPoint& p) const {
  auto it = atoms_.find(p);
  return it == atoms_.end() ? Rational(0) : it->second;
}

DiscreteMeasure DiscreteMeasure::product(const DiscreteMeasure& other) const {
  AtomMap atoms;
  for (const auto& [p, w] : atoms_) {
    for (const auto& [q, v] : other.atoms_) {
      SystemPoint joined = p;
      joined.coords.insert(joined.coords.end(), q.coords.begin(), q.coords.end());
      atoms.emplace_hint(atoms.end(), std::move(joined), w * v);
    }
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::pushforward(const std::function<SystemPoint(const SystemPoint&)>& map) const {
  AtomMap atoms;
  for (const auto& [p, w] : atoms_) atoms[map(p)] += w;
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::marginal(std::size_t offset, std::size_t width) const {
  return pushforward([offset, width](const SystemPoint& p) {
    if (offset + width > p.coords.size()) throw ValidationError("marginal outside point coordinates");
    SystemPoint q;
    q.coords.assign(p.coords.begin() + static_cast<std::ptrdiff_t>(offset),
                    p.coords.begin() + static_cast<std::ptrdiff_t>(offset + width));
    return q;
  });
}

void MixtureBuilder::add_atom(const SystemPoint& p, const Rational& weight) {
  auto [it, inserted] = atoms_.try_emplace(p, weight);
  if (!inserted) {
    it->second += weight;
  } else if (atoms_.size() > max_atoms_) {
    throw BoundExceeded("measure support exceeds " + std::to_string(max_atoms_) + " atoms");
  }
}

void MixtureBuilder::add(const Rational& weight, const DiscreteMeasure& measure) {
  for (const auto& [p, w] : measure.atoms()) add_atom(p, weight * w);
}

DiscreteMeasure MixtureBuilder::finish() && {
  Rational total(0);
  for (const auto& [p, w] : atoms_) total += w;
  if (total != Rational(1)) throw ValidationError("measure has total mass " + to_string(total) + ", expected 1");
  return DiscreteMeasure(std::move(atoms_));
}

// ---------------------------------------------------------------------------
// MeasureKernel

MeasureKernel::MeasureKernel(SystemSpec domain, std::string description, Fn fn, Symmetry symmetry)
    : domain_(std::move(domain)),
      description_(std::move(description)),
      fn_(std::move(fn)),
      symmetry_(std::move(symmetry)) {}

DiscreteMeasure MeasureKernel::operator()(const SystemPoint& p) const {
  domain_.validate(p);
  return fn_(p);
}

DiscreteMeasure MeasureKernel::mix(const DiscreteMeasure& over, std::size_t max_atoms) const {
  MixtureBuilder builder(max_atoms);
  for (const auto& [p, w] : over.atoms()) builder.add(w, (*this)(p));
  return std::move(builder).finish();
}

bool MeasureKernel::invariant_at(const SystemPoint& p) const {
  if (!symmetry_) return true;
  return (*this)(symmetry_(p)) == (*this)(p);
}

// ---------------------------------------------------------------------------
// Finite systems

namespace {

void require_finite(const SystemSpec& system, std::size_t max_points) {
  if (!system.is_finite()) throw ValidationError(system.describe() + " is not a finite system");
  if (system.phase_space_size() > max_points) {
    throw BoundExceeded("phase space of " + system.describe() + " exceeds " + std::to_string(max_points) +
                        " points");
  }
}

const FiniteRotation& require_ergodic_rotation(const SystemSpec& system) {
  const auto* f = system.as<FiniteRotation>();
  if (!f) throw ValidationError("expected a finite rotation, got " + system.describe());
  if (std::gcd(f->step, f->size) != 1) throw ValidationError(system.describe() + " is not ergodic");
  return *f;
}

SystemPoint shift_all(const SystemPoint& p, std::uint64_t t, std::uint64_t size) {
  SystemPoint q = p;
  for (auto& c : q.coords) c = (c + t) % size;
  return q;
}

}  // namespace

std::vector<SystemPoint> cycle_of(const SystemSpec& system, const SystemPoint& p, std::size_t max_points) {
  system.validate(p);
  std::vector<SystemPoint> out{p};
  auto current = step(system, p);
  while (current != p) {
    if (out.size() >= max_points) throw BoundExceeded("cycle longer than " + std::to_string(max_points));
    out.push_back(current);
    current = step(system, current);
  }
  return out;
}

std::vector<SystemPoint> enumerate_points(const SystemSpec& system, std::size_t max_points) {
  require_finite(system, max_points);
  // Flattened coordinates of a finite system are all Z/N for the same N.
  const SystemSpec* base = &system;
  while (const auto* pw = base->as<ProductPower>()) base = pw->base.get();
  auto n = static_cast<std::uint64_t>(base->as<FiniteRotation>()->size);
  const auto width = system.point_width();
  std::vector<SystemPoint> out;
  out.reserve(system.phase_space_size());
  SystemPoint p{std::vector<std::uint64_t>(width, 0)};
  while (true) {
    out.push_back(p);
    std::size_t i = width;
    while (i > 0) {
      --i;
      if (++p.coords[i] < n) break;
      p.coords[i] = 0;
      if (i == 0) return out;
    }
  }
}

DiscreteMeasure uniform_measure(const SystemSpec& system, std::size_t max_points) {
  return DiscreteMeasure::uniform(enumerate_points(system, max_points));
}

MeasureKernel ergodic_decomposition_finite(const SystemSpec& system, std::size_t max_points) {
  require_finite(system, max_points);
  return MeasureKernel(
      system, "uniform on the T-cycle of x",
      [system, max_points](const SystemPoint& p) { return DiscreteMeasure::uniform(cycle_of(system, p, max_points)); },
      [system](const SystemPoint& p) { return step(system, p); });
}

DiscreteMeasure lambda1(const SystemSpec& system, const SystemPoint& x0, const SystemPoint& x1) {
  const auto& f = require_ergodic_rotation(system);
  system.validate(x0);
  system.validate(x1);
  auto n = static_cast<std::uint64_t>(f.size);
  std::vector<SystemPoint> support;
  for (std::uint64_t z = 0; z < n; ++z) {
    support.push_back(SystemPoint{{(x0.coords[0] + z) % n, (x1.coords[0] + z) % n}});
  }
  return DiscreteMeasure::uniform(support);
}

namespace {

struct CycleMass {
  SystemPoint representative;
  Rational mass;
  std::size_t length;
};

/// Splits the support of an invariant measure on `system` into T-cycles.
std::vector<CycleMass> cycles_of_support(const SystemSpec& system, const DiscreteMeasure& m) {
  std::set<SystemPoint> seen;
  std::vector<CycleMass> out;
  for (const auto& [p, w] : m.atoms()) {
    if (seen.contains(p)) continue;
    auto cycle = cycle_of(system, p);
    Rational mass(0);
    for (const auto& q : cycle) {
      seen.insert(q);
      mass += m.weight(q);
    }
    out.push_back({p, mass, cycle.size()});
  }
  return out;
}

enum class CubicForm { kSquare, kDiagonal };

DiscreteMeasure cubic_recursion(const SystemSpec& system, int k, std::size_t max_atoms, CubicForm form) {
  require_ergodic_rotation(system);
  if (k < 0) throw ValidationError("cube dimension must be >= 0");
  auto level = uniform_measure(system, max_atoms);
  for (int j = 0; j < k; ++j) {
    auto level_system = cube_system(system, j);
    auto decomposition = ergodic_decomposition_finite(level_system, ~std::size_t{0});
    auto cycles = cycles_of_support(level_system, level);
    std::size_t projected = 0;
    for (const auto& c : cycles) projected += c.length * c.length;
    if (projected > max_atoms) {
      throw BoundExceeded("cubic measure at dimension " + std::to_string(j + 1) + " needs " +
                          std::to_string(projected) + " atoms");
    }
    MixtureBuilder builder(max_atoms);
    if (form == CubicForm::kSquare) {
      for (const auto& c : cycles) {
        auto component = decomposition(c.representative);
        builder.add(c.mass, component.product(component));
      }
    } else {
      for (const auto& [x, w] : level.atoms()) {
        builder.add(w, DiscreteMeasure::dirac(x).product(decomposition(x)));
      }
    }
    level = std::move(builder).finish();
  }
  return level;
}

}  // namespace

DiscreteMeasure cubic_measure(const SystemSpec& system, int k, std::size_t max_atoms) {
  return cubic_recursion(system, k, max_atoms, CubicForm::kSquare);
}

DiscreteMeasure cubic_measure_alt(const SystemSpec& system, int k, std::size_t max_atoms) {
  return cubic_recursion(system, k, max_atoms, CubicForm::kDiagonal);
}

DiscreteMeasure pushforward_permutation(const DiscreteMeasure& measure, const Permutation& phi) {
  validate_permutation(phi);
  const auto copies = cube_size(static_cast<int>(phi.size()));
  return measure.pushforward([&](const SystemPoint& p) {
    auto entries = split_point(p, copies);
    auto permuted = permute_digits<SystemPoint>(phi, entries);
    return concat_points(permuted);
  });
}

DiscreteMeasure lambda_k_finite(const SystemSpec& system, const CubeConfig& x) {
  const auto& f = require_ergodic_rotation(system);
  if (!(x.system() == system)) throw ValidationError("cube belongs to a different system");
  if (!qk_membership_rotation(x, 0.0)) throw ValidationError("cube is outside the cube set Q^[k]");
  auto n = static_cast<std::uint64_t>(f.size);
  auto base = x.as_power_point();
  std::vector<SystemPoint> support;
  for (std::uint64_t t = 0; t < n; ++t) support.push_back(shift_all(base, t, n));
  return DiscreteMeasure::uniform(support);
}

DiscreteMeasure sigma_k(const SystemSpec& system, const SystemPoint& t, int k, std::size_t max_atoms) {
  require_ergodic_rotation(system);
  system.validate(t);
  if (k < 1) throw ValidationError("sigma needs k >= 1");
  auto level = DiscreteMeasure::dirac(t).product(uniform_measure(system, max_atoms));
  for (int j = 1; j < k; ++j) {
    MixtureBuilder builder(max_atoms);
    for (const auto& [x, w] : level.atoms()) {
      CubeConfig cube(system, j, split_point(x, cube_size(j)));
      builder.add(w, DiscreteMeasure::dirac(x).product(lambda_k_finite(system, cube)));
    }
    level = std::move(builder).finish();
  }
  return level;
}

// ---------------------------------------------------------------------------
// Observables and Birkhoff averages

namespace {

void coordinate_kinds(const SystemSpec& system, std::vector<bool>& circle) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, FiniteRotation>) {
          circle.push_back(false);
        } else if constexpr (std::is_same_v<V, ProductPower>) {
          for (std::int64_t j = 0; j < v.copies; ++j) coordinate_kinds(*v.base, circle);
        } else {
          for (std::size_t i = 0; i < system.point_width(); ++i) circle.push_back(true);
        }
      },
      system.variant());
}

struct CompiledRange {
  bool circle;
  std::uint64_t lo;
  std::uint64_t hi;
  bool to_end;
};

struct CompiledTerm {
  double weight;
  std::vector<CompiledRange> ranges;
};

std::vector<CompiledTerm> compile(const SystemSpec& system, const BoxObservable& f) {
  std::vector<bool> circle;
  coordinate_kinds(system, circle);
  std::vector<CompiledTerm> out;
  for (const auto& term : f.terms) {
    if (term.ranges.size() != circle.size()) {
      throw ValidationError("observable has " + std::to_string(term.ranges.size()) + " ranges, system " +
                            system.describe() + " has " + std::to_string(circle.size()) + " coordinates");
    }
    CompiledTerm compiled{term.weight, {}};
    for (std::size_t i = 0; i < circle.size(); ++i) {
      const auto& r = term.ranges[i];
      if (!(r.lo < r.hi)) throw ValidationError("observable range needs lo < hi");
      if (circle[i]) {
        if (r.lo < 0 || r.hi > 1) throw ValidationError("circle range must lie in [0, 1]");
        compiled.ranges.push_back({true, fixed::from_double(r.lo), r.hi >= 1 ? 0 : fixed::from_double(r.hi), r.hi >= 1});
      } else {
        auto lo = static_cast<std::int64_t>(std::ceil(std::max(0.0, r.lo)));
        auto hi = static_cast<std::int64_t>(std::ceil(std::max(0.0, r.hi)));
        compiled.ranges.push_back({false, static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi), false});
      }
    }
    out.push_back(std::move(compiled));
  }
  return out;
}

double evaluate_compiled(const std::vector<CompiledTerm>& terms, const SystemPoint& p) {
  double total = 0;
  for (const auto& term : terms) {
    bool inside = true;
    for (std::size_t i = 0; i < term.ranges.size() && inside; ++i) {
      const auto& r = term.ranges[i];
      auto c = p.coords[i];
      inside = c >= r.lo && (r.to_end || c < r.hi);
    }
    if (inside) total += term.weight;
  }
  return total;
}

}  // namespace

double evaluate(const SystemSpec& system, const BoxObservable& f, const SystemPoint& p) {
  system.validate(p);
  return evaluate_compiled(compile(system, f), p);
}

std::vector<BirkhoffSample> birkhoff_trace(const SystemSpec& system, const SystemPoint& start,
                                           const BoxObservable& f, std::int64_t iterations, std::int64_t stride) {
  if (iterations < 1) throw ValidationError("Birkhoff average needs N >= 1");
  if (stride < 1) throw ValidationError("trace stride must be >= 1");
  auto terms = compile(system, f);
  system.validate(start);
  std::vector<BirkhoffSample> trace;
  double sum = 0;
  auto current = start;
  for (std::int64_t n = 1; n <= iterations; ++n) {
    current = step(system, current);
    sum += evaluate_compiled(terms, current);
    if (n % stride == 0 || n == iterations) trace.push_back({n, sum / static_cast<double>(n)});
  }
  return trace;
}

double birkhoff_average(const SystemSpec& system, const SystemPoint& start, const BoxObservable& f,
                        std::int64_t iterations) {
  return birkhoff_trace(system, start, f, iterations, iterations).back().average;
}

namespace {

/// Length of the intersection of two arcs [s, s + len) on R/Z.
double arc_overlap(double s1, double len1, double s2, double len2) {
  double total = 0;
  for (int m = -1; m <= 1; ++m) {
    total += std::max(0.0, std::min(s1 + len1, s2 + len2 + m) - std::max(s1, s2 + m));
  }
  return total;
}

double wrap_unit(double x) { return x - std::floor(x); }

}  // namespace

double skew_lambda1_integral(const SystemSpec& skew, const SystemPoint& p0, const SystemPoint& p1,
                             const BoxObservable& f) {
  const auto* s = skew.as<SkewProduct>();
  if (!s) throw ValidationError("expected a skew product, got " + skew.describe());
  if (s->alpha == 0) throw ValidationError("skew product with alpha = 0 is not ergodic");
  skew.validate(p0);
  skew.validate(p1);
  const double x0 = fixed::to_double(p0.coords[0]);
  const double x1 = fixed::to_double(p1.coords[0]);
  double total = 0;
  for (const auto& term : f.terms) {
    if (term.ranges.size() != 4) throw ValidationError("observable on X x X needs four ranges");
    const auto& [ax, ay, bx, by] = std::tie(term.ranges[0], term.ranges[1], term.ranges[2], term.ranges[3]);
    // z + x0 ∈ ax and z + x1 ∈ bx, integrated over z.
    double overlap = arc_overlap(wrap_unit(ax.lo - x0), ax.hi - ax.lo, wrap_unit(bx.lo - x1), bx.hi - bx.lo);
    total += term.weight * overlap * (ay.hi - ay.lo) * (by.hi - by.lo);
  }
  return total;
}

double skew_fiber_integral(const SystemPoint& p, const BoxObservable& f) {
  if (p.coords.size() != 2) throw ValidationError("fibre integral needs a point of the 2-torus");
  const auto x = p.coords[0];
  double total = 0;
  for (const auto& term : f.terms) {
    if (term.ranges.size() != 2) throw ValidationError("observable on the 2-torus needs two ranges");
    const auto& rx = term.ranges[0];
    const auto& ry = term.ranges[1];
    bool inside = x >= fixed::from_double(rx.lo) && (rx.hi >= 1 || x < fixed::from_double(rx.hi));
    if (inside) total += term.weight * (ry.hi - ry.lo);
  }
  return total;
}

}  // namespace sumlab
