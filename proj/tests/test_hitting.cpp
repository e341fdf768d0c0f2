#include <cmath>

#include "doctest.h"
#include "sglab/error.hpp"
#include "sglab/hitting.hpp"

using namespace sglab;

TEST_CASE("hitting frequency basics") {
  SemigroupSystem dbl = parse_system("linear:2");
  SymbolStream ones = SymbolStream::cyclic(Word::parse("1"));

  CHECK(hitting_frequency(dbl, ones, {0.37}, ArcSet::full_circle(), 64).value == 1.0);
  CHECK(hitting_frequency(dbl, ones, {0.37}, ArcSet::empty_set(), 64).value == 0.0);

  // 1/3 -> 2/3 -> 1/3: hits [0.6,0.7) on every other step
  double f = hitting_frequency(dbl, ones, {1.0 / 3.0}, ArcSet::interval(0.6, 0.7), 64).value;
  CHECK(f == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("periodic orbit measures are exactly invariant") {
  SemigroupSystem dbl = parse_system("linear:2");
  auto orbits = periodic_orbit_candidates(dbl, 1, 6);
  CHECK(orbits.size() > 5);
  for (const PeriodicOrbitMeasure& m : orbits) {
    REQUIRE(m.period() >= 1);
    // one forward step along the word permutes the atom list cyclically
    for (std::size_t k = 0; k < m.period(); ++k) {
      RationalPoint next = dbl.gen(m.word.symbols[k % m.word.size()]).eval_exact(m.atoms[k]);
      CHECK(next == m.atoms[(k + 1) % m.period()]);
    }
  }
}

TEST_CASE("logistic candidates follow the conjugate doubling structure") {
  SemigroupSystem logi = parse_system("logistic");
  auto orbits = periodic_orbit_candidates(logi, 1, 4);
  // fixed points 0 and 3/4, the period-2 cycle, and two period-3 / period-4 families
  bool found_fixed_zero = false, found_fixed_34 = false, found_period2 = false;
  for (const PeriodicOrbitMeasure& m : orbits) {
    REQUIRE(m.conjugate);
    auto pos = m.positions();
    if (m.period() == 1 && std::fabs(pos[0] - 0.0) < 1e-12) found_fixed_zero = true;
    if (m.period() == 1 && std::fabs(pos[0] - 0.75) < 1e-12) found_fixed_34 = true;
    if (m.period() == 2) {
      found_period2 = true;
      // (5 +- sqrt 5)/8
      double lo = std::min(pos[0], pos[1]), hi = std::max(pos[0], pos[1]);
      CHECK(lo == doctest::Approx((5.0 - std::sqrt(5.0)) / 8.0).epsilon(1e-9));
      CHECK(hi == doctest::Approx((5.0 + std::sqrt(5.0)) / 8.0).epsilon(1e-9));
    }
    // every atom is a genuine logistic orbit point: h(2y) = logistic(h(y))
    for (std::size_t k = 0; k < m.period(); ++k) {
      double x = std::pow(std::sin(std::numbers::pi * m.atoms[k].to_double()), 2);
      double next = std::pow(
          std::sin(std::numbers::pi * m.atoms[(k + 1) % m.period()].to_double()), 2);
      CHECK((4.0 * x) * (1.0 - x) == doctest::Approx(next).epsilon(1e-9));
    }
  }
  CHECK(found_fixed_zero);
  CHECK(found_fixed_34);
  CHECK(found_period2);
}

TEST_CASE("jenkinson windows") {
  JenkinsonWindow w2 = jenkinson_window(2);
  CHECK(w2.doubling_range.first == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(w2.doubling_range.second == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(w2.logistic_range.first == doctest::Approx(std::sin(std::numbers::pi / 10.0)).epsilon(1e-12));
  CHECK(w2.logistic_range.second == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(w2.intersection.has_value());
  CHECK(w2.intersection->first == doctest::Approx(0.3090169943749474).epsilon(1e-12));
  CHECK(w2.intersection->second == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  JenkinsonWindow w1 = jenkinson_window(1);
  CHECK(w1.doubling_range.first == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(w1.doubling_range.second == doctest::Approx(0.5).epsilon(1e-12));

  // ranges shrink to zero width
  double prev = 1.0;
  for (std::uint64_t n = 1; n <= 10; ++n) {
    JenkinsonWindow w = jenkinson_window(n);
    double width = w.doubling_range.second - w.doubling_range.first;
    CHECK(width < prev);
    prev = width;
    CHECK(w.doubling_range.first > 0.0);
  }
}

TEST_CASE("alpha on the paper systems") {
  // doubling alone, n = 2 window: best frequency 1/2 with a period-4 witness
  SemigroupSystem dbl = parse_system("linear:2");
  std::vector<SupportAtom> pure_dbl = {{Word::parse("1"), 1, 1}};
  AlphaResult a2 = alpha_P_periodic(dbl, pure_dbl, jenkinson_arc(0.32), 8);
  CHECK(a2.num == 1);
  CHECK(a2.den == 2);
  REQUIRE(a2.witnesses.size() == 1);
  CHECK(a2.witnesses[0].period() == 4);
  ExactFrequency f = a2.witnesses[0].mass_in(jenkinson_arc(0.32));
  CHECK(f.hits == 2);

  // n = 3 doubling window
  AlphaResult a3 = alpha_P_periodic(dbl, pure_dbl, jenkinson_arc(0.15), 12);
  CHECK(a3.num == 1);
  CHECK(a3.den == 3);
  CHECK(a3.witnesses[0].period() % 3 == 0);
  CHECK(a3.witnesses[0].period() <= 6);

  // full circle: a fixed point realizes mass 1
  AlphaResult afull = alpha_P_periodic(dbl, pure_dbl, ArcSet::full_circle(), 4);
  CHECK(afull.num == 1);
  CHECK(afull.den == 1);

  // mixed support: (1/3) logistic + (2/3) doubling
  SemigroupSystem both = parse_system("logistic,linear:2");
  std::vector<SupportAtom> mixed = {{Word::parse("1"), 1, 3}, {Word::parse("2"), 2, 3}};
  AlphaResult am = alpha_P_periodic(both, mixed, jenkinson_arc(0.32), 8);
  CHECK(am.num == 1);
  CHECK(am.den == 2);
}

TEST_CASE("gamma matches alpha on the worked example") {
  SemigroupSystem both = parse_system("logistic,linear:2");
  std::vector<SupportAtom> mixed = {{Word::parse("1"), 1, 3}, {Word::parse("2"), 2, 3}};
  GammaResult g = gamma_P_estimate(both, HittingLaw(mixed), jenkinson_arc(0.32), 24, 32, 4096, 8, 7);
  CHECK(g.exact);
  CHECK(g.num == 1);
  CHECK(g.den == 2);
  CHECK(g.value == 0.5);

  // periodic witness is itself part of the gamma search set, so alpha <= gamma
  AlphaResult a = alpha_P_periodic(both, mixed, jenkinson_arc(0.32), 8);
  CHECK(a.value <= g.value + 1e-15);
}

TEST_CASE("gamma trivial cases and monotonicity") {
  SemigroupSystem dbl = parse_system("linear:2");
  BernoulliWalk one({1.0});

  // a set containing the fixed point 0 yields frequency 1
  GammaResult g1 = gamma_P_estimate(dbl, HittingLaw(one), ArcSet::interval(0.0, 0.05), 8, 16, 512, 6, 7);
  CHECK(g1.value == 1.0);
  CHECK(g1.exact);

  GammaResult gfull = gamma_P_estimate(dbl, HittingLaw(one), ArcSet::full_circle(), 1, 1, 16, 2, 7);
  CHECK(gfull.value == 1.0);

  // monotone in the target set
  GammaResult small = gamma_P_estimate(dbl, HittingLaw(one), jenkinson_arc(0.2), 8, 16, 512, 8, 7);
  GammaResult big = gamma_P_estimate(dbl, HittingLaw(one), jenkinson_arc(0.5), 8, 16, 512, 8, 7);
  CHECK(small.value <= big.value + 1e-15);
}

TEST_CASE("hitting equality on the logistic-doubling pair") {
  SemigroupSystem both = parse_system("logistic,linear:2");
  std::vector<SupportAtom> mixed = {{Word::parse("1"), 1, 3}, {Word::parse("2"), 2, 3}};
  HittingEqualityReport rep = hitting_equality_check(both, mixed, 2, 0.32, 2048, 16, 24, 8, 7);
  REQUIRE(rep.window_ok);
  CHECK(rep.alpha.value == 0.5);
  CHECK(rep.gamma.value == 0.5);
  CHECK(rep.expected == 0.5);
  REQUIRE_FALSE(rep.marginal_atoms.empty());
  double total = 0.0;
  for (auto [pos, wt] : rep.marginal_atoms) {
    CHECK(pos >= 0.0);
    CHECK(pos <= 1.0);
    total += wt;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // out-of-window ell is reported, not computed
  HittingEqualityReport bad = hitting_equality_check(both, mixed, 2, 0.9, 512, 4, 8, 6, 7);
  CHECK_FALSE(bad.window_ok);
}

TEST_CASE("hitting error paths") {
  SemigroupSystem rot = parse_system("rotation:1/3");
  CHECK_THROWS_AS(periodic_orbit_candidates(rot, 1, 4), Error);
  SemigroupSystem dbl = parse_system("linear:2");
  std::vector<SupportAtom> bad_weights = {{Word::parse("1"), 1, 2}};
  CHECK_THROWS_AS(alpha_P_periodic(dbl, bad_weights, jenkinson_arc(0.3), 4), Error);
  SemigroupSystem tri = parse_system("linear:3");
  std::vector<SupportAtom> sup = {{Word::parse("1"), 1, 1}};
  CHECK_THROWS_AS(hitting_equality_check(tri, sup, 2, 0.32, 64, 2, 4, 4, 7), Error);
}
