// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "sumlab/correspondence.hpp"
#include "sumlab/cube.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/measure.hpp"
#include "sumlab/setspec.hpp"
#include "sumlab/sumset.hpp"

using namespace sumlab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.require(false, "runtime " + std::to_string(secs) + " s over limit " + std::to_string(limit_seconds) + " s");
  }
  std::printf("criterion %d: %s (%.3f s) %s%s%s\n", id, out.ok ? "PASS" : "FAIL", secs, title,
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
  if (!out.ok) ++failures;
}

SystemPoint P(std::initializer_list<std::uint64_t> c) { return SystemPoint{std::vector<std::uint64_t>(c)}; }

std::vector<std::int64_t> coprime_steps(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t r = 1; r < n; ++r)
    if (std::gcd(r, n) == 1) out.push_back(r);
  if (n == 1) out.push_back(0);
  return out;
}

/// Uniform measure on {(a, b, c, d) : a + d = b + c mod n}, entries in cube order.
DiscreteMeasure parallelogram_law(std::uint64_t n) {
  std::vector<SystemPoint> points;
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      for (std::uint64_t c = 0; c < n; ++c) points.push_back(P({a, b, c, (b + c + n - a) % n}));
  return DiscreteMeasure::uniform(points);
}

IntegerSet random_set(std::mt19937_64& rng, std::int64_t window, int percent) {
  Bits bits(static_cast<std::size_t>(window));
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<int>(rng() % 100) < percent;
  return IntegerSet::from_bits(bits);
}

}  // namespace

int main() {
  criterion(1, "cubic measure k=2 equals the parallelogram law; alternative construction agrees", 0, [] {
    Outcome o;
    for (std::int64_t n : {2, 3, 5, 7}) {
      for (auto r : coprime_steps(n)) {
        const auto start = std::chrono::steady_clock::now();
        auto f = SystemSpec::finite_rotation(n, r);
        auto m = cubic_measure(f, 2);
        auto alt = cubic_measure_alt(f, 2);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto tag = "N=" + std::to_string(n) + " r=" + std::to_string(r);
        o.require(m == parallelogram_law(static_cast<std::uint64_t>(n)), tag + ": law mismatch");
        o.require(alt == m, tag + ": alt mismatch");
        o.require(secs < 1.0, tag + ": over 1 s");
      }
    }
    return o;
  });

  criterion(2, "digit permutations fix cubic and sigma measures (N<=7, k<=3)", 0, [] {
    Outcome o;
    for (std::int64_t n = 1; n <= 7; ++n) {
      for (auto r : coprime_steps(n)) {
        auto f = SystemSpec::finite_rotation(n, r);
        for (int k = 1; k <= 3; ++k) {
          auto perms = all_permutations(k);
          auto m = cubic_measure(f, k);
          for (const auto& phi : perms) o.require(pushforward_permutation(m, phi) == m, "cubic measure moved");
          for (std::uint64_t t = 0; t < static_cast<std::uint64_t>(n); ++t) {
            auto s = sigma_k(f, P({t}), k);
            for (const auto& phi : perms) o.require(pushforward_permutation(s, phi) == s, "sigma moved");
          }
        }
      }
    }
    return o;
  });

  criterion(3, "sigma kernel: marginals, equivariance, average over t", 5.0, [] {
    Outcome o;
    for (std::int64_t n = 1; n <= 7; ++n) {
      for (auto r : coprime_steps(n)) {
        auto f = SystemSpec::finite_rotation(n, r);
        auto mu = uniform_measure(f);
        for (int k = 1; k <= 3; ++k) {
          auto cube = cube_system(f, k);
          MixtureBuilder average;
          const Rational share(1, n);
          for (std::uint64_t t = 0; t < static_cast<std::uint64_t>(n); ++t) {
            auto s = sigma_k(f, P({t}), k);
            o.require(s.marginal(0, 1) == DiscreteMeasure::dirac(P({t})), "first marginal is not a point mass");
            for (std::size_t e = 1; e < cube_size(k); ++e) o.require(s.marginal(e, 1) == mu, "marginal not uniform");
            auto moved = s.pushforward([&](const SystemPoint& p) { return step(cube, p); });
            o.require(moved == sigma_k(f, step(f, P({t})), k), "not equivariant");
            average.add(share, s);
          }
          o.require(std::move(average).finish() == cubic_measure(f, k), "average differs from the cubic measure");
        }
      }
    }
    return o;
  });

  criterion(4, "Erdos cubes agree with dynamical cubes on all of (Z/5)^[2]", 10.0, [] {
    Outcome o;
    auto f = SystemSpec::finite_rotation(5, 1);
    int agree = 0;
    for (std::uint64_t code = 0; code < 625; ++code) {
      std::vector<SystemPoint> entries;
      for (std::uint64_t c = code, i = 0; i < 4; ++i, c /= 5) entries.push_back(P({c % 5}));
      CubeConfig x(f, 2, entries);
      const bool erdos = verify_erdos_cube(x, 0.5, 50, 2).is_erdos;
      const bool q = qk_membership_rotation(x, 1e-9);
      o.require(erdos == q, "disagreement at config " + std::to_string(code));
      agree += erdos == q;
    }
    o.detail = o.ok ? std::to_string(agree) + "/625 agree" : o.detail;
    return o;
  });

  criterion(5, "skew product: diagonal cubes, off-diagonal point, Birkhoff vs lambda integral", 0, [] {
    Outcome o;
    auto s = SystemSpec::skew_product(fixed::golden_conjugate());
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 1000; ++trial) {
      SystemPoint x{{rng(), rng()}};
      const auto n = rng() % 1'000'000;
      const auto m = rng() % 1'000'000;
      CubeConfig c(s, 2, {x, iterate(s, x, n), iterate(s, x, m), iterate(s, x, n + m)});
      o.require(q2_membership_skew(c, 1e-12), "diagonal cube rejected at trial " + std::to_string(trial));
    }

    CubeConfig bad(s, 2, {parse_point(s, "0,0"), parse_point(s, "0,0"), parse_point(s, "0,0"), parse_point(s, "0,1/2")});
    o.require(q2_membership_skew(bad, 1e-12), "off-diagonal point not in Q");
    o.require(!verify_erdos_cube(bad, 0.2, 1'000'000, 2).is_erdos, "off-diagonal point accepted as Erdos cube");

    auto pair = SystemSpec::power(s, 2);
    struct Case {
      const char* p0;
      const char* p1;
      BoxObservable f;
    };
    const std::vector<Case> cases{
        {"0.1,0.2", "0.7,0.9", BoxObservable::box({{0, 0.5}, {0, 0.5}, {0.3, 0.9}, {0.25, 1}})},
        {"0,0", "golden,0.5", BoxObservable::box({{0, 1}, {0, 0.25}, {0, 1}, {0.5, 1}})},
        {"0.3,0.05", "0.3,0.6", BoxObservable{{{1.0, {{0.2, 0.6}, {0, 1}, {0, 1}, {0.1, 0.4}}},
                                              {0.5, {{0, 1}, {0.7, 0.8}, {0.1, 0.9}, {0, 1}}}}}},
    };
    double worst = 0;
    for (const auto& c : cases) {
      auto p0 = parse_point(s, c.p0);
      auto p1 = parse_point(s, c.p1);
      const double expected = skew_lambda1_integral(s, p0, p1, c.f);
      const double got = birkhoff_average(pair, concat_points(std::vector<SystemPoint>{p0, p1}), c.f, 1'000'000);
      worst = std::max(worst, std::abs(got - expected));
    }
    o.require(worst < 5e-3, "Birkhoff deviation " + std::to_string(worst));
    if (o.ok) o.detail = "max Birkhoff deviation " + std::to_string(worst);
    return o;
  });

  criterion(6, "greedy sumset pipeline; greedy success implies oracle success", 30.0, [] {
    Outcome o;
    auto threes = IntegerSet::periodic(3, {0});
    auto r = find_sumset_greedy(threes, 3, {5, 5, 5}, SearchBudget{10'000, 10'000, std::nullopt}, 16, 10'000);
    o.require(r.target_met, "sizes (5,5,5) not reached on 3Z");
    o.require(check_acceptable(r.tuple).acceptable, "greedy output not acceptable");
    o.require(verify_sumset(threes, r.tuple.sets).ok, "greedy output fails sum verification");

    std::vector<IntegerSet> family;
    std::mt19937_64 rng(606);
    for (std::int64_t w : {8, 16, 24, 32, 48, 64}) {
      for (std::int64_t m = 1; m <= 6; ++m) {
        for (std::uint64_t mask = 1; mask < (1u << m); ++mask) {
          std::vector<std::int64_t> residues;
          for (std::int64_t j = 0; j < m; ++j)
            if ((mask >> j) & 1u) residues.push_back(j);
          family.push_back(IntegerSet::periodic(m, residues, w));
        }
      }
      for (int i = 0; i < 40; ++i) family.push_back(random_set(rng, w, 30 + static_cast<int>(rng() % 70)));
    }
    int greedy_hits = 0, checked = 0;
    for (const auto& a : family) {
      const auto w = a.window_size();
      for (std::int64_t s1 = 1; s1 <= 3; ++s1) {
        for (std::int64_t s2 = 1; s2 <= 3; ++s2) {
          ++checked;
          auto g = find_sumset_greedy(a, 2, {s1, s2}, SearchBudget{w, 1'000'000, std::nullopt}, w - 1, w);
          o.require(check_acceptable(g.tuple).acceptable, "greedy output not acceptable");
          if (!g.target_met) continue;
          ++greedy_hits;
          o.require(verify_sumset(a, g.tuple.sets).ok, "greedy output fails sum verification");
          auto witness = find_sumset_oracle(a, {s1, s2}, OracleOptions{w - 1, 1e12, w});
          o.require(witness.has_value(), "oracle missed a greedy success");
          if (witness) o.require(verify_sumset(a, *witness).ok, "oracle witness fails verification");
        }
      }
    }
    if (o.ok) o.detail = std::to_string(greedy_hits) + "/" + std::to_string(checked) + " greedy successes confirmed";
    return o;
  });

  criterion(7, "parity obstruction: union variant fails on odds, plain variant succeeds", 1.0, [] {
    Outcome o;
    auto odds = IntegerSet::periodic(2, {1}, 200);
    o.require(!union_sumset_oracle(odds, {1, 1}, OracleOptions{50, 1e12, std::nullopt}), "union witness found");
    auto w = find_sumset_oracle(odds, {3, 3}, OracleOptions{50, 1e12, std::nullopt});
    o.require(w.has_value(), "no plain witness");
    if (w) o.require(verify_sumset(odds, *w).ok, "plain witness fails verification");
    return o;
  });

  criterion(8, "correspondence round trip and frequency on 1000 random bitsets", 0, [] {
    Outcome o;
    std::mt19937_64 rng(808);
    const Interval full{0, 512};
    for (int trial = 0; trial < 1000; ++trial) {
      Bits bits(512);
      for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1;
      auto a = IntegerSet::from_bits(bits);
      auto c = build_correspondence(a, 511);
      o.require(reconstruct(c.point, c.cylinder, full).members_in(full) == a.members_in(full), "round trip failed");
      o.require(empirical_frequency(c.point, full, c.cylinder) ==
                    density_along(a, FolnerWindowFamily({full})).estimate,
                "frequency differs from density");
    }
    return o;
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
