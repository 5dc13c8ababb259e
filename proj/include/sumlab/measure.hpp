#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/cube.hpp"
#include "sumlab/dynsys.hpp"
#include "sumlab/rational.hpp"

namespace sumlab {

/// Default cap on support sizes and phase-space enumerations.
inline constexpr std::size_t kDefaultMaxAtoms = 1'000'000;

/// A finitely supported probability measure with exact weights. Atoms are
/// kept sorted by point, so equality is structural.
class DiscreteMeasure {
 public:
  using AtomMap = std::map<SystemPoint, Rational>;

  /// Merges repeated points; weights must be positive and sum to one.
  static DiscreteMeasure from_atoms(std::vector<std::pair<SystemPoint, Rational>> atoms);
  static DiscreteMeasure dirac(SystemPoint p);
  /// Points must be distinct.
  static DiscreteMeasure uniform(const std::vector<SystemPoint>& points);

  const AtomMap& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Rational weight(const SystemPoint& p) const;

  template <class Pred>
  Rational mass(Pred&& pred) const {
    Rational total(0);
    for (const auto& [p, w] : atoms_) {
      if (pred(p)) total += w;
    }
    return total;
  }

  /// Product measure; points are concatenated, this measure's coordinates first.
  DiscreteMeasure product(const DiscreteMeasure& other) const;
  DiscreteMeasure pushforward(const std::function<SystemPoint(const SystemPoint&)>& map) const;
  /// Image under the projection onto coordinates [offset, offset + width).
  DiscreteMeasure marginal(std::size_t offset, std::size_t width) const;

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  explicit DiscreteMeasure(AtomMap atoms) : atoms_(std::move(atoms)) {}
  friend class MixtureBuilder;

  AtomMap atoms_;
};

/// Accumulates Σ w_j ν_j with exact weights, failing fast once the merged
/// support exceeds `max_atoms`.
class MixtureBuilder {
 public:
  explicit MixtureBuilder(std::size_t max_atoms = kDefaultMaxAtoms) : max_atoms_(max_atoms) {}

  void add(const Rational& weight, const DiscreteMeasure& measure);
  void add_atom(const SystemPoint& p, const Rational& weight);
  /// Validates that the total mass is one.
  DiscreteMeasure finish() &&;

 private:
  std::size_t max_atoms_;
  DiscreteMeasure::AtomMap atoms_;
};

/// A map point ↦ probability measure over a declared domain.
class MeasureKernel {
 public:
  using Fn = std::function<DiscreteMeasure(const SystemPoint&)>;
  using Symmetry = std::function<SystemPoint(const SystemPoint&)>;

  MeasureKernel(SystemSpec domain, std::string description, Fn fn, Symmetry symmetry = {});

  const SystemSpec& domain() const { return domain_; }
  const std::string& description() const { return description_; }
  DiscreteMeasure operator()(const SystemPoint& p) const;

  /// ∫ κ_x dν(x).
  DiscreteMeasure mix(const DiscreteMeasure& over, std::size_t max_atoms = kDefaultMaxAtoms) const;

  /// κ_{S p} == κ_p for the declared symmetry S; true when none was declared.
  bool invariant_at(const SystemPoint& p) const;

 private:
  SystemSpec domain_;
  std::string description_;
  Fn fn_;
  Symmetry symmetry_;
};

/// Points of the orbit of p (p, Tp, …) until it closes up.
std::vector<SystemPoint> cycle_of(const SystemSpec& system, const SystemPoint& p,
                                  std::size_t max_points = kDefaultMaxAtoms);

/// Every point of a finite system in lexicographic order.
std::vector<SystemPoint> enumerate_points(const SystemSpec& system, std::size_t max_points = kDefaultMaxAtoms);

/// Uniform measure on a finite system.
DiscreteMeasure uniform_measure(const SystemSpec& system, std::size_t max_points = kDefaultMaxAtoms);

/// x ↦ uniform measure on the T-cycle through x. Serves as the ergodic
/// decomposition of every invariant measure on the system.
MeasureKernel ergodic_decomposition_finite(const SystemSpec& system, std::size_t max_points = kDefaultMaxAtoms);

/// Uniform on {(x0 + z, x1 + z) : z ∈ Z/N}: the Kronecker-level
/// decomposition of μ × μ for an ergodic finite rotation.
DiscreteMeasure lambda1(const SystemSpec& system, const SystemPoint& x0, const SystemPoint& x1);

/// μ^⟦k⟧ by μ^⟦j+1⟧ = ∫ (μ^⟦j⟧)_x × (μ^⟦j⟧)_x dμ^⟦j⟧(x).
DiscreteMeasure cubic_measure(const SystemSpec& system, int k, std::size_t max_atoms = kDefaultMaxAtoms);
/// μ^⟦k⟧ by μ^⟦j+1⟧ = ∫ δ_x × (μ^⟦j⟧)_x dμ^⟦j⟧(x).
DiscreteMeasure cubic_measure_alt(const SystemSpec& system, int k, std::size_t max_atoms = kDefaultMaxAtoms);

/// Relabels atoms of a measure on X^⟦k⟧ through the digit permutation φ.
DiscreteMeasure pushforward_permutation(const DiscreteMeasure& measure, const Permutation& phi);

/// Uniform on the diagonal coset {(x_ε + t)_ε : t ∈ Z/N}, the ergodic
/// component of x in the cube system. x must pass qk_membership_rotation.
DiscreteMeasure lambda_k_finite(const SystemSpec& system, const CubeConfig& x);

/// σ^⟦1⟧_t = δ_t × μ and σ^⟦j+1⟧_t = ∫ δ_x × λ^⟦j⟧_x dσ^⟦j⟧_t(x).
DiscreteMeasure sigma_k(const SystemSpec& system, const SystemPoint& t, int k,
                        std::size_t max_atoms = kDefaultMaxAtoms);

/// One coordinate range of a box. Circle coordinates use [lo, hi) with
/// 0 <= lo < hi <= 1; finite-rotation coordinates use the integers in [lo, hi).
struct CoordRange {
  double lo = 0;
  double hi = 1;
};

/// Weighted sum of axis-aligned box indicators on the flattened coordinates.
struct BoxObservable {
  struct Term {
    double weight = 1;
    std::vector<CoordRange> ranges;
  };
  std::vector<Term> terms;

  static BoxObservable box(std::vector<CoordRange> ranges, double weight = 1) {
    return BoxObservable{{Term{weight, std::move(ranges)}}};
  }
};

double evaluate(const SystemSpec& system, const BoxObservable& f, const SystemPoint& p);

/// (1/N) Σ_{n=1..N} f(T^n start), accumulated sequentially in double.
double birkhoff_average(const SystemSpec& system, const SystemPoint& start, const BoxObservable& f,
                        std::int64_t iterations);

struct BirkhoffSample {
  std::int64_t n;
  double average;
};

/// Running averages recorded every `stride` steps and at the final step.
std::vector<BirkhoffSample> birkhoff_trace(const SystemSpec& system, const SystemPoint& start,
                                           const BoxObservable& f, std::int64_t iterations, std::int64_t stride);

/// ∫ f dλ^⟦1⟧_{(p0,p1)} on the skew product, using its circle Kronecker
/// factor π(x, y) = x with fibre measures η_z = δ_z × Lebesgue. `f` is a
/// box observable on X × X (four coordinates x0, y0, x1, y1).
double skew_lambda1_integral(const SystemSpec& skew, const SystemPoint& p0, const SystemPoint& p1,
                             const BoxObservable& f);

/// ∫ f d(δ_x × Lebesgue) for a box observable on the 2-torus.
double skew_fiber_integral(const SystemPoint& p, const BoxObservable& f);

}  // namespace sumlab
