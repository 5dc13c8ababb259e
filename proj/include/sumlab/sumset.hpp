#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "sumlab/cube.hpp"
#include "sumlab/setspec.hpp"

namespace sumlab {

using SetTuple = std::vector<std::vector<std::int64_t>>;

struct SearchBudget {
  /// Largest candidate value an extension may return.
  std::int64_t candidate_bound = 10'000;
  /// Candidate evaluations allowed over a whole search.
  std::int64_t max_candidates = 1'000'000;
  std::optional<std::chrono::milliseconds> time_limit;

  void validate() const;
};

/// Anchors (n_1, …, n_k) and finite sets (B_1, …, B_k) inside a window of A.
///
/// Anchor n_i stands for the cube vertex x_ε = T^{Σ_{ε_i=1} n_i} a of the
/// correspondence point, so membership T^{ε̄·b} x_ε ∈ E reads
/// Σ_{ε_i=1} n_i + Σ_{ε_i=0} b_i ∈ A.
struct AnchoredTuple {
  IntegerSet target;
  std::int64_t window;
  std::vector<std::int64_t> anchors;
  SetTuple sets;

  AnchoredTuple(IntegerSet target, std::vector<std::int64_t> anchors, SetTuple sets = {},
                std::optional<std::int64_t> window = std::nullopt);

  int order() const { return static_cast<int>(anchors.size()); }
};

struct Violation {
  CubeIndex eps;
  /// b_i for the lower coordinates of ε; unset where ε_i = 1.
  std::vector<std::optional<std::int64_t>> b;
  std::int64_t sum;
};

struct AcceptabilityReport {
  bool acceptable = true;
  std::optional<Violation> violation;
};

/// For every ε and every choice of b_i ∈ B_i on the coordinates with
/// ε_i = 0, checks Σ_{ε_i=1} n_i + Σ_{ε_i=0} b_i ∈ A. Vertices are visited
/// from 1⃗ down to 0⃗, so the anchor condition n_1 + … + n_k ∈ A is checked
/// first. Throws WindowOverflow when a mixed sum leaves the window.
AcceptabilityReport check_acceptable(const AnchoredTuple& tuple);

struct ExtendResult {
  std::optional<std::int64_t> candidate;
  std::int64_t candidates_examined = 0;
};

/// Smallest c > max(B_axis) with c <= budget.candidate_bound whose addition
/// to B_axis keeps the tuple acceptable. Throws WindowOverflow if a
/// candidate's sums leave the window before one is found.
ExtendResult extend(const AnchoredTuple& tuple, int axis, const SearchBudget& budget);

struct GreedyResult {
  AnchoredTuple tuple;
  std::vector<std::size_t> achieved_sizes;
  bool target_met = false;
  std::int64_t candidates_spent = 0;
  std::int64_t anchors_tried = 0;
  bool budget_exhausted = false;
};

/// Scans anchors in lexicographic order (each n_i <= anchor_bound, anchor
/// sum in A) and grows B_1, …, B_k round-robin with minimal extensions until
/// every |B_i| reaches its target. Never throws for an unsuccessful search;
/// the best tuple found is returned.
GreedyResult find_sumset_greedy(const IntegerSet& set, int k, const std::vector<std::int64_t>& target_sizes,
                                const SearchBudget& budget, std::int64_t anchor_bound,
                                std::optional<std::int64_t> window = std::nullopt);

struct OracleOptions {
  /// Elements are drawn from [0, element_bound].
  std::int64_t element_bound = 0;
  /// Limit on Π C(element_bound + 1, s_i).
  double max_search_space = 1e12;
  std::optional<std::int64_t> window;
};

/// Exhaustive depth-first search for B_1 + … + B_k ⊂ A ∩ [0, window) with
/// |B_i| = sizes[i]. Returns the lexicographically least witness, or nullopt
/// when none exists within the bound. Throws BoundExceeded when the search
/// space is above the configured limit.
std::optional<SetTuple> find_sumset_oracle(const IntegerSet& set, const std::vector<std::int64_t>& sizes,
                                           const OracleOptions& options);

/// As find_sumset_oracle for k = 2 with the extra demand B_1 ∪ B_2 ⊂ A.
std::optional<SetTuple> union_sumset_oracle(const IntegerSet& set, const std::vector<std::int64_t>& sizes,
                                            const OracleOptions& options);

struct SumsetReport {
  bool ok = true;
  std::optional<std::int64_t> violating_sum;
};

/// Every b_1 + … + b_k ∈ A, sums visited in lexicographic order of b.
SumsetReport verify_sumset(const IntegerSet& set, const SetTuple& sets);

}  // namespace sumlab
