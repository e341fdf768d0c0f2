#include <cmath>

#include "doctest.h"
#include "sglab/error.hpp"
#include "sglab/orbits.hpp"
#include "sglab/rng.hpp"

using namespace sglab;

TEST_CASE("orbit points along cyclic words") {
  SemigroupSystem s = parse_system("linear:2,linear:3");
  FiberedOrbit o(s, SymbolStream::cyclic(Word::parse("12")), {1.0 / 7.0});
  o.enable_exact(RationalPoint(1, 7));
  CHECK(o.point(0).coord == doctest::Approx(1.0 / 7.0));
  CHECK(o.point_exact(4) == RationalPoint(1, 7));
  CHECK(o.point_exact(1) == RationalPoint(2, 7));
  CHECK(o.point_exact(2) == RationalPoint(6, 7));
  CHECK(o.point_exact(3) == RationalPoint(5, 7));

  SemigroupSystem dbl = parse_system("linear:2");
  FiberedOrbit o2(dbl, SymbolStream::cyclic(Word::parse("1")), {1.0 / 3.0});
  o2.enable_exact(RationalPoint(1, 3));
  CHECK(o2.point_exact(2) == RationalPoint(1, 3));
}

TEST_CASE("float orbit tracks the exact arm on dyadic starts") {
  SemigroupSystem s = parse_system("linear:2,linear:3");
  RngCursor rng(108, 1);
  BernoulliWalk w({0.5, 0.5});
  for (int trial = 0; trial < 20; ++trial) {
    std::int64_t q = static_cast<std::int64_t>(rng.next_below(1 << 20));
    SymbolStream stream = SymbolStream::sampled(w, 500, static_cast<std::uint64_t>(trial));
    FiberedOrbit o(s, stream, {static_cast<double>(q) / (1 << 20)});
    o.enable_exact(RationalPoint(q, 1 << 20));
    for (std::uint64_t n : {10ull, 25ull, 40ull}) {
      CHECK(std::fabs(o.point(n).coord - o.point_exact(n).to_double()) < 1e-9);
    }
  }
}

TEST_CASE("dynamical ball membership") {
  SemigroupSystem dbl = parse_system("linear:2");
  FiberedOrbit o(dbl, SymbolStream::cyclic(Word::parse("1")), {0.0});
  CHECK(o.dyn_ball_contains({0.0}, 0.01, 5));
  CHECK_FALSE(o.dyn_ball_contains({0.3}, 0.25, 1));
  CHECK(o.dyn_ball_contains({0.01}, 0.05, 3));        // distances 0.01, 0.02, 0.04
  CHECK_FALSE(o.dyn_ball_contains({0.01}, 0.05, 4));  // 0.08 >= 0.05
}

TEST_CASE("dynamical ball arcs") {
  SemigroupSystem dbl = parse_system("linear:2");
  FiberedOrbit o(dbl, SymbolStream::cyclic(Word::parse("1")), {0.5});
  Arc a = o.dyn_ball_arc(0.1, 3);
  CHECK(a.length == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(a.start == doctest::Approx(0.475).epsilon(1e-12));

  Arc b = o.dyn_ball_arc(0.1, 1);
  CHECK(b.length == doctest::Approx(0.2));

  SemigroupSystem s23 = parse_system("linear:2,linear:3");
  FiberedOrbit o2(s23, SymbolStream::cyclic(Word::parse("12")), {0.3});
  Arc c = o2.dyn_ball_arc(0.1, 2);  // only omega_1 (degree 2) constrains
  CHECK(c.length == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("dynamical ball arc agrees with backward induction") {
  SemigroupSystem s = parse_system("linear:2,linear:3");
  BernoulliWalk w({0.5, 0.5});
  RngCursor rng(109, 1);
  for (int trial = 0; trial < 40; ++trial) {
    SymbolStream stream = SymbolStream::sampled(w, 900, static_cast<std::uint64_t>(trial));
    FiberedOrbit o(s, stream, {rng.next_uniform()});
    double delta = 0.01 + 0.1 * rng.next_uniform();
    std::uint64_t n = 1 + rng.next_below(8);
    ArcSet via_formula = ArcSet::of({o.dyn_ball_arc(delta, n)});
    ArcSet via_induction = o.dyn_ball_set(delta, n);
    CHECK(via_formula.approx_equal(via_induction, 1e-9));
  }
}

TEST_CASE("dynamical balls nest and satisfy the degree sandwich") {
  SemigroupSystem s = parse_system("linear:2,linear:3");
  BernoulliWalk w({0.5, 0.5});
  for (int trial = 0; trial < 20; ++trial) {
    SymbolStream stream = SymbolStream::sampled(w, 901, static_cast<std::uint64_t>(trial));
    RngCursor rng(110, static_cast<std::uint64_t>(trial));
    FiberedOrbit o(s, stream, {rng.next_uniform()});
    double delta = 0.05;
    double r_prev = 1.0;
    for (std::uint64_t n = 1; n <= 10; ++n) {
      Arc arc = o.dyn_ball_arc(delta, n);
      double r = arc.length / 2.0;
      CHECK(r <= r_prev + 1e-15);  // nesting in n
      double lam = 2.0, Lam = 3.0;
      CHECK(r >= delta * std::pow(Lam, -static_cast<double>(n - 1)) - 1e-15);
      CHECK(r <= delta * std::pow(lam, -static_cast<double>(n - 1)) + 1e-15);
      r_prev = r;
    }
  }
}

TEST_CASE("dyn ball rejects unsupported inputs") {
  SemigroupSystem logi = parse_system("logistic");
  FiberedOrbit o(logi, SymbolStream::cyclic(Word::parse("1")), {0.3});
  CHECK_THROWS_AS(o.dyn_ball_arc(0.1, 3), Error);
  CHECK_THROWS_AS(o.dyn_ball_contains({0.3}, -1.0, 3), Error);
}

TEST_CASE("linear preimages shrink exactly") {
  GeneratorMap tri = GeneratorMap::linear(3);
  ArcSet pre = preimage(tri, ArcSet::interval(0.3, 0.6));
  CHECK(pre.arcs().size() == 3);
  CHECK(pre.total_length() == doctest::Approx(0.3).epsilon(1e-12));
  ArcSet fwd;
  for (const Arc& a : pre.arcs()) fwd = fwd.unite(tri.arc_image(a));
  CHECK(fwd.approx_equal(ArcSet::interval(0.3, 0.6), 1e-9));
}
