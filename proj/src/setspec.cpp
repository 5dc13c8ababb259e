#include "sumlab/setspec.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "parse_util.hpp"
#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string window_message(std::int64_t n, std::int64_t window) {
  std::ostringstream os;
  os << "query " << n << " outside window [0, " << window << ")";
  return os.str();
}

}  // namespace

IntegerSet IntegerSet::from_bits(Bits members) {
  if (members.size() == 0) throw ValidationError("window_size must be >= 1");
  auto window = static_cast<std::int64_t>(members.size());
  return IntegerSet(Explicit{std::move(members)}, window, true);
}

IntegerSet IntegerSet::from_members(std::span<const std::int64_t> members, std::int64_t window) {
  if (window < 1) throw ValidationError("window_size must be >= 1");
  Bits bits(static_cast<std::size_t>(window));
  for (auto n : members) {
    if (n < 0 || n >= window) {
      throw ValidationError("member " + std::to_string(n) + " outside window [0, " +
                            std::to_string(window) + ")");
    }
    bits.set(static_cast<std::size_t>(n));
  }
  return from_bits(std::move(bits));
}

IntegerSet IntegerSet::periodic(std::int64_t modulus, std::vector<std::int64_t> residues,
                                std::int64_t window) {
  if (modulus < 1) throw ValidationError("periodic modulus must be >= 1");
  if (window < 1) throw ValidationError("window_size must be >= 1");
  Bits mask(static_cast<std::size_t>(modulus));
  for (auto r : residues) {
    if (r < 0 || r >= modulus) {
      throw ValidationError("residue " + std::to_string(r) + " outside [0, " +
                            std::to_string(modulus) + ")");
    }
    if (mask.test(static_cast<std::size_t>(r))) {
      throw ValidationError("duplicate residue " + std::to_string(r));
    }
    mask.set(static_cast<std::size_t>(r));
  }
  std::sort(residues.begin(), residues.end());
  return IntegerSet(Periodic{modulus, std::move(residues), std::move(mask)}, window, false);
}

IntegerSet IntegerSet::union_of(std::vector<IntegerSet> parts) {
  if (parts.empty()) throw ValidationError("union needs at least one part");
  bool bounded = false;
  std::int64_t bounded_window = std::numeric_limits<std::int64_t>::max();
  std::int64_t nominal_window = 0;
  for (const auto& p : parts) {
    if (p.bounded()) {
      bounded = true;
      bounded_window = std::min(bounded_window, p.window_size());
    }
    nominal_window = std::max(nominal_window, p.window_size());
  }
  auto window = bounded ? bounded_window : nominal_window;
  auto shared = std::make_shared<const std::vector<IntegerSet>>(std::move(parts));
  return IntegerSet(Union{std::move(shared)}, window, bounded);
}

bool IntegerSet::contains(std::int64_t n) const {
  if (n < 0) throw ValidationError("membership query for negative n = " + std::to_string(n));
  if (bounded_ && n >= window_) throw WindowOverflow(window_message(n, window_));
  return contains_unchecked(n);
}

bool IntegerSet::contains_unchecked(std::int64_t n) const {
  return std::visit(
      overloaded{
          [n](const Explicit& e) { return e.bits.test(static_cast<std::size_t>(n)); },
          [n](const Periodic& p) {
            return p.residue_mask.test(static_cast<std::size_t>(n % p.modulus));
          },
          [n](const Union& u) {
            return std::any_of(u.parts->begin(), u.parts->end(),
                               [n](const IntegerSet& s) { return s.contains_unchecked(n); });
          },
      },
      rep_);
}

bool IntegerSet::covers(const Interval& range) const {
  if (range.lo < 0) return false;
  return !bounded_ || range.hi <= window_;
}

std::int64_t IntegerSet::count_in(const Interval& range) const {
  if (!covers(range)) {
    throw WindowOverflow("interval [" + std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                         ") outside window [0, " + std::to_string(window_) + ")");
  }
  std::int64_t count = 0;
  for (auto n = range.lo; n < range.hi; ++n) count += contains_unchecked(n) ? 1 : 0;
  return count;
}

std::vector<std::int64_t> IntegerSet::members_in(const Interval& range) const {
  if (!covers(range)) {
    throw WindowOverflow("interval [" + std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                         ") outside window [0, " + std::to_string(window_) + ")");
  }
  std::vector<std::int64_t> out;
  for (auto n = range.lo; n < range.hi; ++n) {
    if (contains_unchecked(n)) out.push_back(n);
  }
  return out;
}

Bits IntegerSet::to_bits(std::int64_t length) const {
  if (length < 0) throw ValidationError("negative bitset length");
  if (bounded_ && length > window_) throw WindowOverflow(window_message(length - 1, window_));
  Bits bits(static_cast<std::size_t>(length));
  for (std::int64_t n = 0; n < length; ++n) {
    if (contains_unchecked(n)) bits.set(static_cast<std::size_t>(n));
  }
  return bits;
}

FolnerWindowFamily::FolnerWindowFamily(std::vector<Interval> windows) : windows_(std::move(windows)) {
  if (windows_.empty()) throw ValidationError("window family is empty");
  std::int64_t previous = 0;
  for (const auto& w : windows_) {
    if (w.lo < 0) throw ValidationError("window starts below 0");
    if (w.hi <= w.lo) throw ValidationError("window must satisfy M > L");
    if (w.length() <= previous) throw ValidationError("window lengths must strictly increase");
    previous = w.length();
  }
}

DensityReport density_along(const IntegerSet& set, const FolnerWindowFamily& windows) {
  DensityReport report;
  for (const auto& w : windows.windows()) {
    report.values.emplace_back(set.count_in(w), w.length());
  }
  report.estimate = report.values.back();
  bool non_increasing = true;
  bool non_decreasing = true;
  for (std::size_t j = 1; j < report.values.size(); ++j) {
    if (report.values[j] > report.values[j - 1]) non_increasing = false;
    if (report.values[j] < report.values[j - 1]) non_decreasing = false;
  }
  report.non_monotone = !non_increasing && !non_decreasing;
  return report;
}

std::vector<Rational> folner_defect(const FolnerWindowFamily& windows, std::int64_t t) {
  if (t < 1) throw ValidationError("shift t must be >= 1");
  std::vector<Rational> out;
  out.reserve(windows.size());
  for (const auto& w : windows.windows()) {
    auto overlap = std::max<std::int64_t>(0, w.length() - t);
    out.emplace_back(overlap, w.length());
  }
  return out;
}

namespace {

/// Splits on `sep` at parenthesis depth zero.
std::vector<std::string_view> split_top_level(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') {
      if (--depth < 0) throw ParseError("unbalanced ')' in set spec");
    }
    if (c == sep && depth == 0) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '(' in set spec");
  out.push_back(text.substr(start));
  return out;
}

std::pair<std::string_view, std::int64_t> split_window_suffix(std::string_view body,
                                                              std::string_view what) {
  auto at = body.rfind('@');
  if (at == std::string_view::npos) {
    throw ParseError(std::string(what) + " spec needs an '@<N>' window suffix");
  }
  return {body.substr(0, at), detail::parse_int(body.substr(at + 1), "window size")};
}

}  // namespace

IntegerSet parse_set_spec(std::string_view spec) {
  spec = detail::trim(spec);
  constexpr std::string_view kPeriodic = "periodic:";
  constexpr std::string_view kList = "list:";
  constexpr std::string_view kFile = "file:";
  constexpr std::string_view kUnion = "union(";

  if (spec.starts_with(kPeriodic)) {
    auto body = spec.substr(kPeriodic.size());
    std::int64_t window = kDefaultPeriodicWindow;
    if (auto at = body.find('@'); at != std::string_view::npos) {
      window = detail::parse_int(body.substr(at + 1), "window size");
      body = body.substr(0, at);
    }
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError("periodic spec is periodic:<m>:<residues>");
    auto modulus = detail::parse_int(body.substr(0, colon), "modulus");
    auto residues = detail::parse_int_list(body.substr(colon + 1), "residue");
    return IntegerSet::periodic(modulus, std::move(residues), window);
  }
  if (spec.starts_with(kList)) {
    auto [members, window] = split_window_suffix(spec.substr(kList.size()), "list");
    auto values = detail::parse_int_list(members, "member");
    return IntegerSet::from_members(values, window);
  }
  if (spec.starts_with(kFile)) {
    auto [path, window] = split_window_suffix(spec.substr(kFile.size()), "file");
    std::ifstream in{std::string(path)};
    if (!in) throw ParseError("cannot open set file '" + std::string(path) + "'");
    std::vector<std::int64_t> values;
    std::string line;
    while (std::getline(in, line)) {
      auto trimmed = detail::trim(line);
      if (trimmed.empty()) continue;
      values.push_back(detail::parse_int(trimmed, "member"));
    }
    return IntegerSet::from_members(values, window);
  }
  if (spec.starts_with(kUnion)) {
    if (!spec.ends_with(')')) throw ParseError("union spec must end with ')'");
    auto inner = spec.substr(kUnion.size(), spec.size() - kUnion.size() - 1);
    std::vector<IntegerSet> parts;
    for (auto piece : split_top_level(inner, ';')) parts.push_back(parse_set_spec(piece));
    if (parts.size() < 2) throw ParseError("union needs at least two parts");
    return IntegerSet::union_of(std::move(parts));
  }
  throw ParseError("unknown set spec '" + std::string(spec) + "'");
}

FolnerWindowFamily parse_window_spec(std::string_view spec) {
  spec = detail::trim(spec);
  constexpr std::string_view kIntervals = "intervals:";
  if (!spec.starts_with(kIntervals)) throw ParseError("window spec must start with 'intervals:'");
  std::vector<Interval> windows;
  for (auto piece : detail::split(spec.substr(kIntervals.size()), ',')) {
    auto dash = piece.find('-');
    if (dash == std::string_view::npos) throw ParseError("interval must be <L>-<M>");
    windows.push_back({detail::parse_int(piece.substr(0, dash), "interval start"),
                       detail::parse_int(piece.substr(dash + 1), "interval end")});
  }
  try {
    return FolnerWindowFamily(std::move(windows));
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace sumlab
