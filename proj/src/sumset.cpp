#include "sumlab/sumset.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "sumlab/errors.hpp"

namespace sumlab {

void SearchBudget::validate() const {
  if (candidate_bound < 1) throw ValidationError("candidate bound must be positive");
  if (max_candidates < 1) throw ValidationError("candidate budget must be positive");
  if (time_limit && time_limit->count() < 1) throw ValidationError("time limit must be positive");
}

AnchoredTuple::AnchoredTuple(IntegerSet target_set, std::vector<std::int64_t> anchor_values, SetTuple set_values,
                             std::optional<std::int64_t> window_bound)
    : target(std::move(target_set)),
      window(window_bound.value_or(target.window_size())),
      anchors(std::move(anchor_values)),
      sets(std::move(set_values)) {
  if (anchors.empty()) throw ValidationError("sumset order k must be >= 1");
  if (sets.empty()) sets.resize(anchors.size());
  if (sets.size() != anchors.size()) throw ValidationError("need one set per anchor");
  if (window < 1) throw ValidationError("window must be >= 1");
  if (target.bounded() && window > target.window_size()) {
    throw WindowOverflow("tuple window exceeds the set's window");
  }
  for (auto n : anchors) {
    if (n < 0) throw ValidationError("anchors must be non-negative");
  }
  for (const auto& b : sets) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] < 0) throw ValidationError("set elements must be non-negative");
      if (j > 0 && b[j] <= b[j - 1]) throw ValidationError("sets must be strictly increasing");
    }
  }
}

namespace {

/// Calls visit(choice, sum) for every choice of one element from each list
/// in `lists`, in lexicographic order; stops early when visit returns false.
/// No calls when a list is empty; one call with the base sum when there are
/// no lists.
template <class Visit>
bool for_each_choice(const std::vector<const std::vector<std::int64_t>*>& lists, std::int64_t base, Visit&& visit) {
  for (const auto* l : lists) {
    if (l->empty()) return true;
  }
  std::vector<std::size_t> idx(lists.size(), 0);
  while (true) {
    std::int64_t sum = base;
    for (std::size_t j = 0; j < lists.size(); ++j) sum += (*lists[j])[idx[j]];
    if (!visit(idx, sum)) return false;
    std::size_t j = lists.size();
    while (true) {
      if (j == 0) return true;
      --j;
      if (++idx[j] < lists[j]->size()) break;
      idx[j] = 0;
    }
  }
}

std::int64_t anchor_part(const AnchoredTuple& t, std::size_t rank, int k) {
  std::int64_t sum = 0;
  for (int i = 1; i <= k; ++i) {
    if ((rank >> (k - i)) & 1u) sum += t.anchors[static_cast<std::size_t>(i - 1)];
  }
  return sum;
}

[[noreturn]] void overflow(std::int64_t sum, std::int64_t window) {
  throw WindowOverflow("mixed sum " + std::to_string(sum) + " outside window [0, " + std::to_string(window) + ")");
}

/// Mixed sums that a new element c on `axis` is added to: for every ε with
/// ε_axis = 0, Σ_{ε_j=1} n_j + Σ_{j≠axis, ε_j=0} b_j. Sorted, distinct.
std::vector<std::int64_t> extension_offsets(const AnchoredTuple& t, int axis) {
  const int k = t.order();
  std::set<std::int64_t> offsets;
  for (std::size_t rank = 0; rank < cube_size(k); ++rank) {
    if ((rank >> (k - axis)) & 1u) continue;
    std::vector<const std::vector<std::int64_t>*> lists;
    for (int j = 1; j <= k; ++j) {
      if (j != axis && !((rank >> (k - j)) & 1u)) lists.push_back(&t.sets[static_cast<std::size_t>(j - 1)]);
    }
    for_each_choice(lists, anchor_part(t, rank, k), [&](const auto&, std::int64_t sum) {
      offsets.insert(sum);
      return true;
    });
  }
  return {offsets.begin(), offsets.end()};
}

bool candidate_fits(const IntegerSet& a, const std::vector<std::int64_t>& offsets, std::int64_t c) {
  return std::all_of(offsets.begin(), offsets.end(), [&](std::int64_t o) { return a.contains(c + o); });
}

struct Deadline {
  std::optional<std::chrono::steady_clock::time_point> at;

  explicit Deadline(const SearchBudget& b) {
    if (b.time_limit) at = std::chrono::steady_clock::now() + *b.time_limit;
  }
  bool passed() const { return at && std::chrono::steady_clock::now() >= *at; }
};

/// Minimal fitting candidate in [from, to], examining at most `allowance`.
ExtendResult scan_candidates(const IntegerSet& a, const std::vector<std::int64_t>& offsets, std::int64_t from,
                             std::int64_t to, std::int64_t allowance, std::int64_t window, const Deadline& deadline) {
  ExtendResult result;
  const std::int64_t reach = offsets.empty() ? 0 : offsets.back();
  for (auto c = from; c <= to && result.candidates_examined < allowance; ++c) {
    if ((result.candidates_examined & 0xff) == 0 && deadline.passed()) break;
    ++result.candidates_examined;
    if (c + reach >= window) overflow(c + reach, window);
    if (candidate_fits(a, offsets, c)) {
      result.candidate = c;
      break;
    }
  }
  return result;
}

}  // namespace

AcceptabilityReport check_acceptable(const AnchoredTuple& tuple) {
  const int k = tuple.order();
  AcceptabilityReport report;
  for (std::size_t rank = cube_size(k); rank-- > 0;) {
    std::vector<const std::vector<std::int64_t>*> lists;
    std::vector<int> axes;
    for (int j = 1; j <= k; ++j) {
      if (!((rank >> (k - j)) & 1u)) {
        lists.push_back(&tuple.sets[static_cast<std::size_t>(j - 1)]);
        axes.push_back(j);
      }
    }
    for_each_choice(lists, anchor_part(tuple, rank, k), [&](const std::vector<std::size_t>& idx, std::int64_t sum) {
      if (sum >= tuple.window) overflow(sum, tuple.window);
      if (tuple.target.contains(sum)) return true;
      Violation v{CubeIndex(k, rank), std::vector<std::optional<std::int64_t>>(static_cast<std::size_t>(k)), sum};
      for (std::size_t m = 0; m < axes.size(); ++m) {
        v.b[static_cast<std::size_t>(axes[m] - 1)] = (*lists[m])[idx[m]];
      }
      report.acceptable = false;
      report.violation = std::move(v);
      return false;
    });
    if (!report.acceptable) return report;
  }
  return report;
}

ExtendResult extend(const AnchoredTuple& tuple, int axis, const SearchBudget& budget) {
  budget.validate();
  if (axis < 1 || axis > tuple.order()) throw ValidationError("axis outside [1, k]");
  const auto& current = tuple.sets[static_cast<std::size_t>(axis - 1)];
  const std::int64_t from = current.empty() ? 0 : current.back() + 1;
  auto offsets = extension_offsets(tuple, axis);
  return scan_candidates(tuple.target, offsets, from, budget.candidate_bound, budget.max_candidates, tuple.window,
                         Deadline(budget));
}

GreedyResult find_sumset_greedy(const IntegerSet& set, int k, const std::vector<std::int64_t>& target_sizes,
                                const SearchBudget& budget, std::int64_t anchor_bound,
                                std::optional<std::int64_t> window) {
  budget.validate();
  if (k < 1) throw ValidationError("sumset order k must be >= 1");
  if (static_cast<int>(target_sizes.size()) != k) throw ValidationError("need one target size per set");
  for (auto s : target_sizes) {
    if (s < 1) throw ValidationError("target sizes must be positive");
  }
  if (anchor_bound < 0) throw ValidationError("anchor bound must be non-negative");

  const std::int64_t limit = window.value_or(set.window_size());
  const Deadline deadline(budget);
  GreedyResult best{AnchoredTuple(set, std::vector<std::int64_t>(static_cast<std::size_t>(k), 0), {}, limit),
                    std::vector<std::size_t>(static_cast<std::size_t>(k), 0)};
  std::size_t best_total = 0;
  bool have_best = false;

  std::vector<std::int64_t> anchors(static_cast<std::size_t>(k), 0);
  while (true) {
    std::int64_t anchor_sum = 0;
    for (auto n : anchors) anchor_sum += n;
    if (anchor_sum < limit && set.contains(anchor_sum)) {
      ++best.anchors_tried;
      AnchoredTuple tuple(set, anchors, {}, limit);
      bool stuck = false;
      std::size_t met = 0;
      for (int axis = 1; !stuck; axis = axis % k + 1) {
        met = 0;
        for (int i = 0; i < k; ++i) {
          if (static_cast<std::int64_t>(tuple.sets[static_cast<std::size_t>(i)].size()) >= target_sizes[static_cast<std::size_t>(i)]) ++met;
        }
        if (met == static_cast<std::size_t>(k)) break;
        auto& b = tuple.sets[static_cast<std::size_t>(axis - 1)];
        if (static_cast<std::int64_t>(b.size()) >= target_sizes[static_cast<std::size_t>(axis - 1)]) continue;

        auto offsets = extension_offsets(tuple, axis);
        const std::int64_t reach = offsets.empty() ? 0 : offsets.back();
        const std::int64_t from = b.empty() ? 0 : b.back() + 1;
        const std::int64_t to = std::min(budget.candidate_bound, limit - 1 - reach);
        auto remaining = budget.max_candidates - best.candidates_spent;
        auto step = scan_candidates(set, offsets, from, to, remaining, limit, deadline);
        best.candidates_spent += step.candidates_examined;
        if (!step.candidate) {
          stuck = true;
        } else {
          b.push_back(*step.candidate);
        }
        if (best.candidates_spent >= budget.max_candidates || deadline.passed()) {
          best.budget_exhausted = true;
          stuck = true;
        }
      }

      std::size_t total = 0;
      for (const auto& b : tuple.sets) total += b.size();
      bool done = met == static_cast<std::size_t>(k);
      if (!have_best || total > best_total || done) {
        best.achieved_sizes.clear();
        for (const auto& b : tuple.sets) best.achieved_sizes.push_back(b.size());
        best.tuple = std::move(tuple);
        best_total = total;
        have_best = true;
      }
      if (done) {
        best.target_met = true;
        best.budget_exhausted = false;
        return best;
      }
      if (best.budget_exhausted) return best;
    }
    // Next anchor tuple in lexicographic order.
    std::size_t j = anchors.size();
    while (true) {
      if (j == 0) return best;
      --j;
      if (++anchors[j] <= anchor_bound) break;
      anchors[j] = 0;
    }
  }
}

namespace {

double search_space(const std::vector<std::int64_t>& sizes, std::int64_t bound) {
  double total = 1;
  for (auto s : sizes) {
    // log-domain C(bound + 1, s)
    double n = static_cast<double>(bound + 1);
    if (s > bound + 1) return 0;
    total *= std::exp(std::lgamma(n + 1) - std::lgamma(static_cast<double>(s) + 1) -
                      std::lgamma(n - static_cast<double>(s) + 1));
  }
  return total;
}

class SumsetSearch {
 public:
  SumsetSearch(const IntegerSet& set, std::vector<std::int64_t> sizes, const OracleOptions& options,
               bool elements_in_set)
      : sizes_(std::move(sizes)), bound_(options.element_bound) {
    const auto k = sizes_.size();
    if (k < 1) throw ValidationError("sumset order k must be >= 1");
    for (auto s : sizes_) {
      if (s < 1) throw ValidationError("set sizes must be positive");
    }
    if (bound_ < 0) throw ValidationError("element bound must be non-negative");
    window_ = options.window.value_or(set.window_size());
    if (set.bounded() && window_ > set.window_size()) throw WindowOverflow("oracle window exceeds the set's window");
    if (search_space(sizes_, bound_) > options.max_search_space) {
      throw BoundExceeded("oracle search space exceeds the configured limit; lower the element bound");
    }
    const auto width = static_cast<std::size_t>(window_);
    target_ = set.to_bits(window_);
    allowed_ = Bits(width);
    for (std::int64_t n = 0; n <= bound_ && n < window_; ++n) {
      if (!elements_in_set || target_.test(static_cast<std::size_t>(n))) allowed_.set(static_cast<std::size_t>(n));
    }
    chosen_.resize(k);
  }

  std::optional<SetTuple> run() {
    if (search_set(0, target_)) return chosen_;
    return std::nullopt;
  }

 private:
  /// `room` holds the t with (B_1 + … + B_{j-1}) + t ⊂ A.
  bool search_set(std::size_t j, const Bits& room) {
    const auto last = sizes_.size() - 1;
    if (j == last) {
      Bits candidates = room & allowed_;
      std::vector<std::int64_t> picked;
      for (auto pos = candidates.find_first(); pos != Bits::npos && picked.size() < static_cast<std::size_t>(sizes_[j]);
           pos = candidates.find_next(pos)) {
        picked.push_back(static_cast<std::int64_t>(pos));
      }
      if (picked.size() < static_cast<std::size_t>(sizes_[j])) return false;
      chosen_[j] = std::move(picked);
      return true;
    }
    Bits everything(room.size());
    everything.set();
    return search_element(j, room, everything, -1);
  }

  /// `rest` is the set of r with b + r ∈ room for every b already in B_j.
  bool search_element(std::size_t j, const Bits& room, const Bits& rest, std::int64_t previous) {
    const auto needed = static_cast<std::int64_t>(sizes_[j]) - static_cast<std::int64_t>(chosen_[j].size());
    if (needed == 0) return search_set(j + 1, rest);
    for (auto b = previous + 1; b <= bound_ - (needed - 1) && b < window_; ++b) {
      if (!allowed_.test(static_cast<std::size_t>(b))) continue;
      Bits next = rest & (room >> static_cast<std::size_t>(b));
      if (!feasible(j, next)) continue;
      chosen_[j].push_back(b);
      if (search_element(j, room, next, b)) return true;
      chosen_[j].pop_back();
    }
    return false;
  }

  /// Necessary conditions on the remaining-sum set.
  bool feasible(std::size_t j, const Bits& rest) const {
    if (j + 2 == sizes_.size()) {
      // The last set is drawn directly from `rest`.
      return static_cast<std::int64_t>((rest & allowed_).count()) >= sizes_.back();
    }
    return rest.any();
  }

  std::vector<std::int64_t> sizes_;
  std::int64_t bound_;
  std::int64_t window_ = 0;
  Bits target_;
  Bits allowed_;
  SetTuple chosen_;
};

}  // namespace

std::optional<SetTuple> find_sumset_oracle(const IntegerSet& set, const std::vector<std::int64_t>& sizes,
                                           const OracleOptions& options) {
  return SumsetSearch(set, sizes, options, false).run();
}

std::optional<SetTuple> union_sumset_oracle(const IntegerSet& set, const std::vector<std::int64_t>& sizes,
                                            const OracleOptions& options) {
  if (sizes.size() != 2) throw ValidationError("union variant needs exactly two sets");
  return SumsetSearch(set, sizes, options, true).run();
}

SumsetReport verify_sumset(const IntegerSet& set, const SetTuple& sets) {
  if (sets.empty()) throw ValidationError("need at least one set");
  std::vector<const std::vector<std::int64_t>*> lists;
  for (const auto& b : sets) {
    for (auto x : b) {
      if (x < 0) throw ValidationError("set elements must be non-negative");
    }
    lists.push_back(&b);
  }
  SumsetReport report;
  for_each_choice(lists, 0, [&](const auto&, std::int64_t sum) {
    if (set.contains(sum)) return true;
    report.ok = false;
    report.violating_sum = sum;
    return false;
  });
  return report;
}

}  // namespace sumlab
