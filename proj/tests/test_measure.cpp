#include <cmath>

#include "doctest.h"
#include "sumlab/errors.hpp"
#include "sumlab/measure.hpp"

using namespace sumlab;

namespace {

SystemPoint P(std::initializer_list<std::uint64_t> c) { return SystemPoint{c}; }

/// Uniform measure on {(a,b,c,d) : a + d ≡ b + c mod n}, by enumeration.
DiscreteMeasure parallelogram_law(std::uint64_t n) {
  std::vector<SystemPoint> support;
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      for (std::uint64_t c = 0; c < n; ++c)
        for (std::uint64_t d = 0; d < n; ++d)
          if ((a + d) % n == (b + c) % n) support.push_back(P({a, b, c, d}));
  return DiscreteMeasure::uniform(support);
}

bool all_same_weight(const DiscreteMeasure& m, const Rational& w) {
  for (const auto& [p, v] : m.atoms()) {
    if (v != w) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("discrete measures") {
  auto m = DiscreteMeasure::from_atoms({{P({1}), Rational(1, 3)}, {P({2}), Rational(1, 3)}, {P({1}), Rational(1, 3)}});
  CHECK(m.size() == 2);
  CHECK(m.weight(P({1})) == Rational(2, 3));
  CHECK(m.weight(P({7})) == Rational(0));
  CHECK_THROWS_AS(DiscreteMeasure::from_atoms({{P({1}), Rational(1, 2)}}), ValidationError);
  CHECK_THROWS_AS(DiscreteMeasure::from_atoms({{P({1}), Rational(3, 2)}, {P({2}), Rational(-1, 2)}}), ValidationError);
  CHECK_THROWS_AS(DiscreteMeasure::uniform({P({1}), P({1})}), ValidationError);
  CHECK(m.product(DiscreteMeasure::dirac(P({5}))).weight(P({1, 5})) == Rational(2, 3));
  CHECK(m.marginal(0, 1) == m);
}

TEST_CASE("mixture builder guards support size") {
  MixtureBuilder b(2);
  b.add_atom(P({0}), Rational(1, 3));
  b.add_atom(P({1}), Rational(1, 3));
  b.add_atom(P({1}), Rational(1, 3));
  CHECK_THROWS_AS(b.add_atom(P({2}), Rational(1, 3)), BoundExceeded);
}

TEST_CASE("ergodic decomposition of finite systems") {
  auto f6 = SystemSpec::finite_rotation(6, 2);
  auto kappa = ergodic_decomposition_finite(f6);
  CHECK(kappa(P({1})) == DiscreteMeasure::uniform({P({1}), P({3}), P({5})}));

  auto f5 = SystemSpec::finite_rotation(5, 1);
  for (std::uint64_t x = 0; x < 5; ++x) CHECK(ergodic_decomposition_finite(f5)(P({x})) == uniform_measure(f5));

  auto pair = SystemSpec::power(f5, 2);
  std::vector<SystemPoint> orbit;
  for (std::uint64_t z = 0; z < 5; ++z) orbit.push_back(P({(1 + z) % 5, (4 + z) % 5}));
  CHECK(ergodic_decomposition_finite(pair)(P({1, 4})) == DiscreteMeasure::uniform(orbit));

  for (const auto& sys : {f6, f5, pair, SystemSpec::power(f6, 2)}) {
    auto k = ergodic_decomposition_finite(sys);
    CHECK(k.mix(uniform_measure(sys)) == uniform_measure(sys));
    for (const auto& p : enumerate_points(sys)) CHECK(k.invariant_at(p));
  }
  CHECK_THROWS_AS(ergodic_decomposition_finite(parse_system_spec("skew:1/8")), ValidationError);
  CHECK_THROWS_AS(ergodic_decomposition_finite(SystemSpec::power(f5, 16)), BoundExceeded);
}

TEST_CASE("lambda1") {
  auto f5 = SystemSpec::finite_rotation(5, 1);
  CHECK(lambda1(f5, P({1}), P({4})) ==
        DiscreteMeasure::uniform({P({1, 4}), P({2, 0}), P({3, 1}), P({4, 2}), P({0, 3})}));
  CHECK(lambda1(f5, P({0}), P({0})) ==
        DiscreteMeasure::uniform({P({0, 0}), P({1, 1}), P({2, 2}), P({3, 3}), P({4, 4})}));
  auto pair = SystemSpec::power(f5, 2);
  for (std::uint64_t a = 0; a < 5; ++a) {
    for (std::uint64_t b = 0; b < 5; ++b) {
      auto l = lambda1(f5, P({a}), P({b}));
      CHECK(l.marginal(1, 1) == uniform_measure(f5));
      CHECK(l.pushforward([&](const SystemPoint& p) { return step(pair, p); }) == l);
      // Depends on (a, b) only through the cycle of (a, b).
      CHECK(lambda1(f5, P({(a + 1) % 5}), P({(b + 1) % 5})) == l);
    }
  }
  CHECK_THROWS_AS(lambda1(SystemSpec::finite_rotation(6, 2), P({0}), P({0})), ValidationError);
}

TEST_CASE("cubic measures") {
  auto f5 = SystemSpec::finite_rotation(5, 1);
  auto m1 = cubic_measure(f5, 1);
  CHECK(m1.size() == 25);
  CHECK(m1 == uniform_measure(f5).product(uniform_measure(f5)));

  auto m2 = cubic_measure(f5, 2);
  CHECK(m2.size() == 125);
  CHECK(all_same_weight(m2, Rational(1, 125)));
  CHECK(m2 == parallelogram_law(5));
  CHECK(cubic_measure_alt(f5, 2) == m2);

  auto two = cubic_measure(SystemSpec::finite_rotation(2, 1), 2);
  CHECK(two.size() == 8);
  CHECK(two == parallelogram_law(2));
  auto two_alt = cubic_measure_alt(SystemSpec::finite_rotation(2, 1), 1);
  CHECK(two_alt.size() == 4);
  CHECK(two_alt == cubic_measure(SystemSpec::finite_rotation(2, 1), 1));

  auto three = cubic_measure(SystemSpec::finite_rotation(3, 2), 2);
  CHECK(three.size() == 27);
  CHECK(cubic_measure_alt(SystemSpec::finite_rotation(3, 2), 2) == three);

  // The support of μ^[k] is exactly the cube set.
  for (int k = 1; k <= 3; ++k) {
    auto m = cubic_measure(f5, k);
    for (const auto& [p, w] : m.atoms()) {
      CHECK(qk_membership_rotation(CubeConfig(f5, k, split_point(p, cube_size(k))), 0));
    }
    CHECK(m.size() == static_cast<std::size_t>(std::pow(5, k + 1)));
  }
  CHECK_THROWS_AS(cubic_measure(f5, 3, 100), BoundExceeded);
  CHECK_THROWS_AS(cubic_measure(SystemSpec::finite_rotation(6, 2), 2), ValidationError);
}

TEST_CASE("permutation pushforward") {
  auto f5 = SystemSpec::finite_rotation(5, 1);
  CHECK(pushforward_permutation(cubic_measure(f5, 2), {2, 1}) == cubic_measure(f5, 2));
  CHECK(pushforward_permutation(DiscreteMeasure::dirac(P({1, 2, 3, 4})), {2, 1}) ==
        DiscreteMeasure::dirac(P({1, 3, 2, 4})));
  for (std::uint64_t t = 0; t < 5; ++t) {
    auto s = sigma_k(f5, P({t}), 2);
    CHECK(pushforward_permutation(s, {2, 1}) == s);
  }
  CHECK_THROWS_AS(pushforward_permutation(cubic_measure(f5, 2), {1, 1}), ValidationError);
}

TEST_CASE("lambda_k on the cube set") {
  auto f5 = SystemSpec::finite_rotation(5, 1);
  auto x = CubeConfig(f5, 2, {P({0}), P({1}), P({2}), P({3})});
  std::vector<SystemPoint> coset;
  for (std::uint64_t t = 0; t < 5; ++t) coset.push_back(P({t, (1 + t) % 5, (2 + t) % 5, (3 + t) % 5}));
  auto l = lambda_k_finite(f5, x);
  CHECK(l == DiscreteMeasure::uniform(coset));

  // Same as the cycle of x under T^[2] inside the 125-point support.
  auto cube2 = cube_system(f5, 2);
  CHECK(l == ergodic_decomposition_finite(cube2)(x.as_power_point()));

  CHECK(lambda_k_finite(f5, CubeConfig(f5, 1, {P({1}), P({4})})) == lambda1(f5, P({1}), P({4})));
  CHECK_THROWS_AS(lambda_k_finite(f5, CubeConfig(f5, 2, {P({0}), P({1}), P({2}), P({4})})), ValidationError);

  for (int k = 1; k <= 3; ++k) {
    auto mu = cubic_measure(f5, k);
    auto sys = cube_system(f5, k);
    MixtureBuilder mix;
    for (const auto& [p, w] : mu.atoms()) {
      CubeConfig c(f5, k, split_point(p, cube_size(k)));
      auto lk = lambda_k_finite(f5, c);
      CubeConfig moved(f5, k, split_point(step(sys, p), cube_size(k)));
      CHECK(lambda_k_finite(f5, moved) == lk);
      CHECK(lk.pushforward([&](const SystemPoint& q) { return step(sys, q); }) == lk);
      CHECK(DiscreteMeasure::uniform(cycle_of(sys, p)) == lk);
      mix.add(w, lk);
    }
    CHECK(std::move(mix).finish() == mu);
  }
}

TEST_CASE("sigma kernels") {
  auto f5 = SystemSpec::finite_rotation(5, 1);
  auto s1 = sigma_k(f5, P({2}), 1);
  CHECK(s1.size() == 5);
  CHECK(s1 == DiscreteMeasure::dirac(P({2})).product(uniform_measure(f5)));

  std::vector<SystemPoint> support;
  for (std::uint64_t x = 0; x < 5; ++x)
    for (std::uint64_t z = 0; z < 5; ++z) support.push_back(P({2, x, (2 + z) % 5, (x + z) % 5}));
  CHECK(sigma_k(f5, P({2}), 2) == DiscreteMeasure::uniform(support));

  for (int k = 1; k <= 3; ++k) {
    MixtureBuilder avg;
    for (std::uint64_t t = 0; t < 5; ++t) avg.add(Rational(1, 5), sigma_k(f5, P({t}), k));
    CHECK(std::move(avg).finish() == cubic_measure(f5, k));
  }
  CHECK_THROWS_AS(sigma_k(f5, P({2}), 0), ValidationError);
}

TEST_CASE("Birkhoff averages") {
  auto g = parse_system_spec("torus:1:golden");
  CHECK(std::abs(birkhoff_average(g, P({0}), BoxObservable::box({{0, 0.25}}), 1'000'000) - 0.25) < 5e-3);

  auto f5 = parse_system_spec("finrot:5:1");
  CHECK(std::abs(birkhoff_average(f5, P({0}), BoxObservable::box({{2, 3}}), 100'000) - 0.2) < 1e-4);

  auto s = parse_system_spec("skew:golden");
  CHECK(std::abs(birkhoff_average(s, P({0, 0}), BoxObservable::box({{0, 0.5}, {0, 0.5}}), 1'000'000) - 0.25) < 5e-3);

  auto trace = birkhoff_trace(f5, P({0}), BoxObservable::box({{2, 3}}), 10, 4);
  REQUIRE(trace.size() == 3);
  CHECK(trace[0].n == 4);
  CHECK(trace[2].n == 10);
  CHECK(trace[2].average == 0.2);

  CHECK_THROWS_AS(birkhoff_average(f5, P({0}), BoxObservable::box({{0, 1}, {0, 1}}), 10), ValidationError);
  CHECK_THROWS_AS(birkhoff_average(f5, P({0}), BoxObservable::box({{2, 3}}), 0), ValidationError);
  CHECK_THROWS_AS(birkhoff_average(g, P({0}), BoxObservable::box({{0.5, 0.25}}), 10), ValidationError);
}

TEST_CASE("finite genericity of lambda1 along T x T orbits") {
  for (std::int64_t n : {5, 7}) {
    auto f = SystemSpec::finite_rotation(n, 1);
    auto pair = SystemSpec::power(f, 2);
    for (std::uint64_t a = 0; a < static_cast<std::uint64_t>(n); ++a) {
      for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(n); x += 2) {
        BoxObservable box = BoxObservable::box({{1, 3}, {0, 2}});
        auto l = lambda1(f, P({a}), P({x}));
        auto integral = l.mass([&](const SystemPoint& p) { return evaluate(pair, box, p) > 0; });
        CHECK(birkhoff_average(pair, P({a, x}), box, n) == to_double(integral));
      }
    }
  }
}

TEST_CASE("skew product fibre averages") {
  // (x, y) -> (x, y + x): each vertical circle carries δ_x × Lebesgue.
  auto s = parse_system_spec("skew:0");
  auto start = parse_point(s, "golden,0.1");
  BoxObservable f{{{1.0, {{0.5, 0.7}, {0.1, 0.35}}}, {2.0, {{0, 1}, {0.6, 0.7}}}}};
  double expected = skew_fiber_integral(start, f);
  CHECK(expected == doctest::Approx(2 * 0.1 + 0.25));
  CHECK(std::abs(birkhoff_average(s, start, f, 1'000'000) - expected) < 5e-3);
}

TEST_CASE("skew product lambda1 integral") {
  auto s = parse_system_spec("skew:golden");
  auto pair = SystemSpec::power(s, 2);
  auto p0 = parse_point(s, "0.1,0.2");
  auto p1 = parse_point(s, "0.7,0.9");
  BoxObservable f = BoxObservable::box({{0, 0.5}, {0, 0.5}, {0.3, 0.9}, {0.25, 1}});
  // z + 0.1 ∈ [0, 0.5) and z + 0.7 ∈ [0.3, 0.9) both hold for z ∈ [0, 0.2) ∪ [0.9, 1).
  CHECK(skew_lambda1_integral(s, p0, p1, f) == doctest::Approx(0.3 * 0.5 * 0.75));
  auto start = concat_points(std::vector<SystemPoint>{p0, p1});
  CHECK(std::abs(birkhoff_average(pair, start, f, 1'000'000) - skew_lambda1_integral(s, p0, p1, f)) < 5e-3);
  CHECK_THROWS_AS(skew_lambda1_integral(parse_system_spec("skew:0"), p0, p1, f), ValidationError);
}
