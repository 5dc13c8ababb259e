#include "sumlab/cube.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <numeric>

#include "sumlab/errors.hpp"

namespace sumlab {

CubeIndex::CubeIndex(int k, std::size_t rank) : k_(k), rank_(rank) {
  if (k < 0 || k > 20) throw ValidationError("cube dimension out of range");
  if (rank >= cube_size(k)) throw ValidationError("cube rank out of range");
}

CubeIndex CubeIndex::from_bits(std::span<const int> bits) {
  std::size_t rank = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw ValidationError("cube index bits must be 0 or 1");
    rank = (rank << 1) | static_cast<std::size_t>(b);
  }
  return CubeIndex(static_cast<int>(bits.size()), rank);
}

int CubeIndex::bit(int i) const {
  if (i < 1 || i > k_) throw ValidationError("axis " + std::to_string(i) + " outside [1, k]");
  return static_cast<int>((rank_ >> (k_ - i)) & 1u);
}

CubeIndex CubeIndex::complement() const { return CubeIndex(k_, (cube_size(k_) - 1) ^ rank_); }

int CubeIndex::weight() const { return std::popcount(rank_); }

std::string CubeIndex::to_string() const {
  std::string out;
  for (int i = 1; i <= k_; ++i) out.push_back(static_cast<char>('0' + bit(i)));
  return out;
}

void validate_permutation(const Permutation& phi) {
  std::vector<bool> seen(phi.size() + 1, false);
  for (int v : phi) {
    if (v < 1 || v > static_cast<int>(phi.size()) || seen[static_cast<std::size_t>(v)]) {
      throw ValidationError("digit map is not a permutation of {1..k}");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation identity_permutation(int k) {
  Permutation phi(static_cast<std::size_t>(k));
  std::iota(phi.begin(), phi.end(), 1);
  return phi;
}

Permutation axis_transposition(int k, int i) {
  if (i < 1 || i > k) throw ValidationError("axis outside [1, k]");
  auto phi = identity_permutation(k);
  std::swap(phi[0], phi[static_cast<std::size_t>(i - 1)]);
  return phi;
}

std::vector<Permutation> all_permutations(int k) {
  std::vector<Permutation> out;
  auto phi = identity_permutation(k);
  do {
    out.push_back(phi);
  } while (std::next_permutation(phi.begin(), phi.end()));
  return out;
}

std::size_t permute_rank(const Permutation& phi, std::size_t rank) {
  const auto k = static_cast<int>(phi.size());
  std::size_t out = 0;
  for (int i = 1; i <= k; ++i) {
    auto source = phi[static_cast<std::size_t>(i - 1)];
    auto bit = (rank >> (k - source)) & 1u;
    out |= bit << (k - i);
  }
  return out;
}

CubeConfig::CubeConfig(SystemSpec system, int k, std::vector<SystemPoint> entries)
    : system_(std::move(system)), k_(k), entries_(std::move(entries)) {
  if (k_ < 0 || k_ > 20) throw ValidationError("cube dimension out of range");
  if (entries_.size() != cube_size(k_)) {
    throw ValidationError("cube of dimension " + std::to_string(k_) + " needs " +
                          std::to_string(cube_size(k_)) + " entries");
  }
  for (const auto& e : entries_) system_.validate(e);
}

namespace {

CubeConfig face(const CubeConfig& x, int axis, int value) {
  const int k = x.dimension();
  if (k < 1) throw ValidationError("faces need k >= 1");
  if (axis < 1 || axis > k) throw ValidationError("axis " + std::to_string(axis) + " outside [1, k]");
  std::vector<SystemPoint> entries;
  entries.reserve(cube_size(k - 1));
  // Ranks increase with the remaining bits in lexicographic order.
  for (std::size_t r = 0; r < cube_size(k); ++r) {
    if (static_cast<int>((r >> (k - axis)) & 1u) == value) entries.push_back(x.entries()[r]);
  }
  return CubeConfig(x.system(), k - 1, std::move(entries));
}

}  // namespace

CubeConfig lower_face(const CubeConfig& x, int axis) { return face(x, axis, 0); }
CubeConfig upper_face(const CubeConfig& x, int axis) { return face(x, axis, 1); }

std::vector<SystemPoint> forget_first(const CubeConfig& x) {
  if (x.dimension() < 1) throw ValidationError("F* needs k >= 1");
  return {x.entries().begin() + 1, x.entries().end()};
}

CubeConfig digit_permutation(const Permutation& phi, const CubeConfig& x) {
  if (static_cast<int>(phi.size()) != x.dimension()) {
    throw ValidationError("permutation size does not match cube dimension");
  }
  return CubeConfig(x.system(), x.dimension(), permute_digits<SystemPoint>(phi, x.entries()));
}

SystemSpec cube_system(const SystemSpec& base, int k) {
  return SystemSpec::power(base, static_cast<std::int64_t>(cube_size(k)));
}

ErdosVerdict verify_erdos_cube(const CubeConfig& x, double eps, std::int64_t horizon, std::int64_t min_hits) {
  const int k = x.dimension();
  if (k < 1) throw ValidationError("Erdős cube verification needs k >= 1");
  auto face_sys = cube_system(x.system(), k - 1);
  std::vector<std::future<OmegaVerdict>> jobs;
  for (int axis = 1; axis <= k; ++axis) {
    jobs.push_back(std::async(std::launch::async, [&, axis] {
      return omega_member_approx(face_sys, lower_face(x, axis).as_power_point(),
                                 upper_face(x, axis).as_power_point(), eps, horizon, min_hits);
    }));
  }
  ErdosVerdict verdict{true, {}, eps, horizon, min_hits};
  for (auto& job : jobs) {
    verdict.axes.push_back(job.get());
    verdict.is_erdos = verdict.is_erdos && verdict.axes.back().member;
  }
  return verdict;
}

bool q2_membership_skew(const CubeConfig& x, double tol) {
  if (!x.system().as<SkewProduct>()) throw ValidationError("q2 test needs a skew-product cube");
  if (x.dimension() != 2) throw ValidationError("q2 test needs k = 2");
  const auto& e = x.entries();
  fixed::Raw outer = e[0].coords[0] + e[3].coords[0];
  fixed::Raw inner = e[1].coords[0] + e[2].coords[0];
  return fixed::circular_distance(outer, inner) <= tol;
}

bool is_minimal_rotation(const SystemSpec& system, double tol) {
  if (const auto* f = system.as<FiniteRotation>()) return std::gcd(f->step, f->size) == 1;
  if (const auto* t = system.as<TorusRotation>()) {
    if (t->alpha.size() != 1 || t->alpha[0] == 0) return false;
    // The orbit is the subgroup generated by alpha in Z/2^64, with mesh 2^ctz / 2^64.
    return std::ldexp(1.0, std::countr_zero(t->alpha[0]) - 64) <= tol;
  }
  return false;
}

bool qk_membership_rotation(const CubeConfig& x, double tol) {
  const int k = x.dimension();
  if (k < 1 || k > 3) throw ValidationError("Q^[k] rotation test supports k in {1, 2, 3}");
  const auto& system = x.system();
  if (!system.as<FiniteRotation>() && !system.as<TorusRotation>()) {
    throw ValidationError("Q^[k] rotation test needs a finite or torus rotation");
  }
  if (!is_minimal_rotation(system, tol)) throw ValidationError("rotation " + system.describe() + " is not minimal");

  const auto& e = x.entries();
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      const std::size_t bi = std::size_t{1} << (k - i);
      const std::size_t bj = std::size_t{1} << (k - j);
      for (std::size_t r = 0; r < cube_size(k); ++r) {
        if (r & (bi | bj)) continue;
        const auto& a = e[r].coords[0];
        const auto& b = e[r | bj].coords[0];
        const auto& c = e[r | bi].coords[0];
        const auto& d = e[r | bi | bj].coords[0];
        if (const auto* f = system.as<FiniteRotation>()) {
          auto n = static_cast<std::uint64_t>(f->size);
          if ((a + d) % n != (b + c) % n) return false;
        } else if (fixed::circular_distance(a + d, b + c) > tol) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace sumlab
