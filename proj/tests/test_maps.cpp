#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sglab/error.hpp"
#include "sglab/maps.hpp"
#include "sglab/rng.hpp"

using namespace sglab;

TEST_CASE("generator evaluation") {
  GeneratorMap dbl = GeneratorMap::linear(2);
  CHECK(dbl.eval({0.7}).coord == doctest::Approx(0.4).epsilon(1e-12));

  GeneratorMap logi = GeneratorMap::logistic_map();
  CHECK(logi.eval({0.75}).coord == doctest::Approx(0.75));

  // conjugacy h(y) = sin^2(pi y): logistic(h(1/3)) = h(2/3) = 3/4
  double h13 = std::pow(std::sin(std::numbers::pi / 3.0), 2);
  double h23 = std::pow(std::sin(2.0 * std::numbers::pi / 3.0), 2);
  CHECK(logi.eval({h13}).coord == doctest::Approx(h23).epsilon(1e-12));
  CHECK(h23 == doctest::Approx(0.75));

  GeneratorMap rot = GeneratorMap::rotation_map(3, 10);
  CHECK(rot.eval({0.95}).coord == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("word evaluation follows first-symbol-first order") {
  SemigroupSystem s = parse_system("linear:2,linear:3");
  // g2(g1(0.1)) = 3*(0.2) = 0.6
  CHECK(word_eval(s, Word::parse("12"), {0.1}).coord == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(word_eval(s, Word{}, {0.37}).coord == doctest::Approx(0.37));

  RationalPoint x(1, 7);
  RationalPoint y = word_eval_exact(s, Word::parse("1212"), x);
  CHECK(y == x);  // 1/7 -> 2/7 -> 6/7 -> 5/7 -> 1/7

  CHECK_THROWS_AS(word_eval(s, Word::parse("3"), {0.1}), Error);
}

TEST_CASE("word associativity: concatenation acts left part first") {
  SemigroupSystem s = parse_system("linear:2,linear:3");
  RngCursor rng(105, 1);
  for (int i = 0; i < 200; ++i) {
    Word u, v;
    int nu = 1 + static_cast<int>(rng.next_below(5));
    int nv = 1 + static_cast<int>(rng.next_below(5));
    for (int j = 0; j < nu; ++j) u.symbols.push_back(1 + static_cast<int>(rng.next_below(2)));
    for (int j = 0; j < nv; ++j) v.symbols.push_back(1 + static_cast<int>(rng.next_below(2)));
    RationalPoint x(static_cast<std::int64_t>(rng.next_below(255)), 257);
    RationalPoint lhs = word_eval_exact(s, concat(u, v), x);
    RationalPoint rhs = word_eval_exact(s, v, word_eval_exact(s, u, x));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("log derivative") {
  CHECK(GeneratorMap::linear(3).log_abs_derivative({0.123}) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(GeneratorMap::rotation_map(3, 10).log_abs_derivative({0.4}) == 0.0);
  CHECK(GeneratorMap::logistic_map().log_abs_derivative({0.0}) ==
        doctest::Approx(std::log(4.0)));
  CHECK_THROWS_AS(GeneratorMap::logistic_map().log_abs_derivative({0.5}), Error);
}

TEST_CASE("arc images") {
  GeneratorMap tri = GeneratorMap::linear(3);
  ArcSet img = tri.arc_image(Arc{0.8, 0.1});
  REQUIRE(img.arcs().size() == 1);
  CHECK(img.arcs()[0].start == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(img.arcs()[0].length == doctest::Approx(0.3).epsilon(1e-12));

  CHECK(tri.arc_image(Arc{0.1, 0.4}).is_full());

  GeneratorMap logi = GeneratorMap::logistic_map();
  ArcSet li = logi.arc_image(Arc{0.2, 0.1});
  REQUIRE(li.arcs().size() == 1);
  CHECK(li.arcs()[0].start == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(li.arcs()[0].length == doctest::Approx(0.2).epsilon(1e-9));

  // image length scaling for linear maps
  RngCursor rng(106, 1);
  for (int i = 0; i < 200; ++i) {
    double len = 0.5 * rng.next_uniform();
    Arc a{rng.next_uniform(), len};
    for (int k : {2, 3, 5}) {
      GeneratorMap g = GeneratorMap::linear(k);
      CHECK(g.arc_image(a).total_length() ==
            doctest::Approx(std::min(1.0, k * len)).epsilon(1e-9));
    }
  }
}

TEST_CASE("periodic points of linear words") {
  SemigroupSystem dbl = parse_system("linear:2");
  auto fix1 = periodic_points(dbl, Word::parse("1"));
  REQUIRE(fix1.size() == 1);
  CHECK(fix1[0] == RationalPoint(0, 1));

  auto fix2 = periodic_points(dbl, Word::parse("11"));
  REQUIRE(fix2.size() == 3);
  CHECK(fix2[1] == RationalPoint(1, 3));
  CHECK(fix2[2] == RationalPoint(2, 3));

  SemigroupSystem s23 = parse_system("linear:2,linear:3");
  auto fix12 = periodic_points(s23, Word::parse("12"));
  REQUIRE(fix12.size() == 5);
  for (std::size_t m = 0; m < 5; ++m) {
    CHECK(fix12[m] == RationalPoint(static_cast<std::int64_t>(m), 5));
    CHECK(word_eval_exact(s23, Word::parse("12"), fix12[m]) == fix12[m]);
  }

  SemigroupSystem rot = parse_system("rotation:1/3");
  CHECK_THROWS_AS(periodic_points(rot, Word::parse("1")), Error);
}

TEST_CASE("periodic points satisfy the fixed point equation exactly") {
  SemigroupSystem s = parse_system("linear:2,linear:3");
  RngCursor rng(107, 1);
  for (int i = 0; i < 30; ++i) {
    Word w;
    int n = 1 + static_cast<int>(rng.next_below(6));
    for (int j = 0; j < n; ++j) w.symbols.push_back(1 + static_cast<int>(rng.next_below(2)));
    auto pts = periodic_points(s, w);
    BigInt d = 1;
    for (int sym : w.symbols) d *= s.gen(sym).degree;
    CHECK(pts.size() == static_cast<std::size_t>((d - 1).convert_to<std::int64_t>()));
    for (std::size_t m = 0; m < pts.size(); m += std::max<std::size_t>(1, pts.size() / 7)) {
      CHECK(word_eval_exact(s, w, pts[m]) == pts[m]);
    }
  }
}

TEST_CASE("generator parsing grammar") {
  CHECK(parse_generator("LINEAR:4").degree == 4);
  CHECK(parse_generator("Logistic").kind == MapKind::logistic);
  GeneratorMap r = parse_generator("rotation:2/5");
  CHECK(r.rot_num == 2);
  CHECK(r.rot_den == 5);
  CHECK_THROWS_AS(parse_generator("linear:1"), Error);
  CHECK_THROWS_AS(parse_generator("henon"), Error);
  CHECK_THROWS_AS(parse_generator("rotation:5/3"), Error);

  SemigroupSystem s = parse_system("linear:2,logistic,rotation:1/4");
  CHECK(s.p() == 3);
  CHECK(s.gen(1).degree == 2);
  CHECK(s.gen(3).rot_den == 4);
  CHECK_FALSE(s.all_linear());
}
