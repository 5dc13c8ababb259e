#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sumlab/dynsys.hpp"

namespace sumlab {

/// An element ε of {0,1}^k, identified with its position in lexicographic
/// order: ε_1 is the most significant bit of the rank, so 0⃗ has rank 0 and
/// 1⃗ has rank 2^k − 1.
class CubeIndex {
 public:
  CubeIndex(int k, std::size_t rank);
  static CubeIndex from_bits(std::span<const int> bits);

  int dimension() const { return k_; }
  std::size_t rank() const { return rank_; }
  /// ε_i for 1 <= i <= k.
  int bit(int i) const;
  CubeIndex complement() const;
  int weight() const;
  /// e.g. "011".
  std::string to_string() const;

  friend bool operator==(const CubeIndex&, const CubeIndex&) = default;

 private:
  int k_;
  std::size_t rank_;
};

inline std::size_t cube_size(int k) { return std::size_t{1} << k; }

/// A permutation of {1..k} stored as its images φ(1), …, φ(k).
using Permutation = std::vector<int>;

/// Throws ValidationError unless `phi` is a bijection of {1..k}.
void validate_permutation(const Permutation& phi);
Permutation identity_permutation(int k);
/// φ_i: exchanges 1 and i.
Permutation axis_transposition(int k, int i);
/// All k! permutations in lexicographic order.
std::vector<Permutation> all_permutations(int k);

/// Rank of φ(ε), where (φε)_i = ε_{φ(i)}.
std::size_t permute_rank(const Permutation& phi, std::size_t rank);

/// (φx)_ε = x_{φ(ε)} on any 2^k-indexed tuple.
template <class T>
std::vector<T> permute_digits(const Permutation& phi, std::span<const T> entries) {
  validate_permutation(phi);
  std::vector<T> out;
  out.reserve(entries.size());
  for (std::size_t r = 0; r < entries.size(); ++r) out.push_back(entries[permute_rank(phi, r)]);
  return out;
}

/// x ∈ X^⟦k⟧ with entries in lexicographic order.
class CubeConfig {
 public:
  CubeConfig(SystemSpec system, int k, std::vector<SystemPoint> entries);

  const SystemSpec& system() const { return system_; }
  int dimension() const { return k_; }
  const std::vector<SystemPoint>& entries() const { return entries_; }
  const SystemPoint& at(const CubeIndex& eps) const { return entries_[eps.rank()]; }

  /// The entries as one point of the product power X^{2^k}.
  SystemPoint as_power_point() const { return concat_points(entries_); }

  friend bool operator==(const CubeConfig&, const CubeConfig&) = default;

 private:
  SystemSpec system_;
  int k_;
  std::vector<SystemPoint> entries_;
};

/// F_i x = (x_ε : ε_i = 0).
CubeConfig lower_face(const CubeConfig& x, int axis);
/// F^i x = (x_ε : ε_i = 1).
CubeConfig upper_face(const CubeConfig& x, int axis);
/// F* x = (x_ε : ε ≠ 0⃗).
std::vector<SystemPoint> forget_first(const CubeConfig& x);
CubeConfig digit_permutation(const Permutation& phi, const CubeConfig& x);

/// The system X^⟦k⟧ = X^{2^k} on which T^⟦k⟧ acts.
SystemSpec cube_system(const SystemSpec& base, int k);

struct ErdosVerdict {
  bool is_erdos = false;
  /// One verdict per axis, index 0 is axis 1.
  std::vector<OmegaVerdict> axes;
  double eps = 0;
  std::int64_t horizon = 0;
  std::int64_t min_hits = 0;
};

/// For every axis i, tests F^i x ∈ ω(F_i x, T^⟦k−1⟧) with
/// omega_member_approx. Axes are scanned concurrently.
ErdosVerdict verify_erdos_cube(const CubeConfig& x, double eps, std::int64_t horizon, std::int64_t min_hits);

/// Q^⟦2⟧ membership on the skew product: x₁ + x₄ = x₂ + x₃ on first
/// coordinates, within `tol` in the circle metric.
bool q2_membership_skew(const CubeConfig& x, double tol);

/// Q^⟦k⟧ membership on a minimal rotation, k ∈ {1, 2, 3}: every 2-face has
/// vanishing alternating sum. Finite rotations compare exactly.
bool qk_membership_rotation(const CubeConfig& x, double tol);

/// True for finite rotations with gcd(step, N) = 1 and one-dimensional
/// torus rotations whose orbit is tol-dense at 64-bit precision.
bool is_minimal_rotation(const SystemSpec& system, double tol);

}  // namespace sumlab
