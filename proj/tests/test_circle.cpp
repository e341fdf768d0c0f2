#include <cmath>

#include "doctest.h"
#include "sglab/circle.hpp"
#include "sglab/error.hpp"
#include "sglab/rng.hpp"

using namespace sglab;

TEST_CASE("circle_dist basics") {
  CHECK(circle_dist({0.1}, {0.9}) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(circle_dist({0.25}, {0.5}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(circle_dist({0.37}, {0.37}) == 0.0);
}

TEST_CASE("circle_dist properties on random triples") {
  RngCursor rng(101, 1);
  for (int i = 0; i < 2000; ++i) {
    CirclePoint x{rng.next_uniform()}, y{rng.next_uniform()}, z{rng.next_uniform()};
    double dxy = circle_dist(x, y);
    CHECK(dxy == circle_dist(y, x));
    CHECK(dxy <= 0.5 + 1e-15);
    CHECK(circle_dist(x, z) <= dxy + circle_dist(y, z) + 1e-12);
  }
}

TEST_CASE("ball construction") {
  Arc a = ball({0.5}, 0.1);
  CHECK(a.start == doctest::Approx(0.4));
  CHECK(a.length == doctest::Approx(0.2));

  Arc w = ball({0.0}, 0.1);
  CHECK(w.start == doctest::Approx(0.9));
  CHECK(w.length == doctest::Approx(0.2));

  Arc full = ball({0.3}, 0.6);
  CHECK(full.length == 1.0);

  CHECK_THROWS_AS(ball({0.3}, 0.0), Error);
  CHECK_THROWS_AS(ball({0.3}, -0.2), Error);
}

TEST_CASE("ball monotone in radius") {
  RngCursor rng(102, 1);
  for (int i = 0; i < 500; ++i) {
    CirclePoint x{rng.next_uniform()};
    double d1 = 0.01 + 0.2 * rng.next_uniform();
    double d2 = d1 + 0.2 * rng.next_uniform();
    ArcSet small = ArcSet::of({ball(x, d1)});
    ArcSet big = ArcSet::of({ball(x, d2)});
    CHECK(small.intersect(big).total_length() == doctest::Approx(small.total_length()));
  }
}

TEST_CASE("arcset lengths and normalization") {
  ArcSet s = ArcSet::of({Arc{0.0, 0.25}, Arc{0.5, 0.25}});
  CHECK(s.total_length() == doctest::Approx(0.5));

  // half-open convention: touching arcs do not overlap but merge into one
  ArcSet touching = ArcSet::of({Arc{0.0, 0.25}, Arc{0.25, 0.25}});
  CHECK(touching.arcs().size() == 1);
  CHECK(touching.total_length() == doctest::Approx(0.5));

  ArcSet a = ArcSet::interval(0.0, 0.25);
  ArcSet b = ArcSet::interval(0.25, 0.5);
  CHECK_FALSE(a.intersects_halfopen(b));
  CHECK(a.intersects_closed(b));

  // overlapping input arcs must not be double counted
  ArcSet over = ArcSet::of({Arc{0.0, 0.6}, Arc{0.3, 0.6}});
  CHECK(over.total_length() == doctest::Approx(0.9));
}

TEST_CASE("arcset intersection with wrap") {
  ArcSet a = ArcSet::of({Arc{0.9, 0.2}});  // [0.9,1) u [0,0.1)
  ArcSet b = ArcSet::interval(0.05, 0.95);
  ArcSet inter = a.intersect(b);
  CHECK(inter.total_length() == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(inter.arcs().size() == 2);
  CHECK(inter.arcs()[0].start == doctest::Approx(0.05));
  CHECK(inter.arcs()[1].start == doctest::Approx(0.9));
}

TEST_CASE("normalization idempotent and rotation invariant length") {
  RngCursor rng(103, 1);
  for (int i = 0; i < 300; ++i) {
    std::vector<Arc> arcs;
    int m = 1 + static_cast<int>(rng.next_below(5));
    for (int j = 0; j < m; ++j) {
      arcs.push_back(Arc{rng.next_uniform(), 0.3 * rng.next_uniform()});
    }
    ArcSet s = ArcSet::from_arcs(arcs);
    ArcSet renorm = ArcSet::from_arcs(s.arcs());
    CHECK(s.approx_equal(renorm));
    double off = rng.next_uniform();
    CHECK(s.rotated(off).total_length() == doctest::Approx(s.total_length()).epsilon(1e-9));
  }
}

TEST_CASE("union length subadditive, inclusion-exclusion") {
  RngCursor rng(104, 1);
  for (int i = 0; i < 300; ++i) {
    ArcSet a = ArcSet::of({Arc{rng.next_uniform(), 0.4 * rng.next_uniform()}});
    ArcSet b = ArcSet::of({Arc{rng.next_uniform(), 0.4 * rng.next_uniform()}});
    double u = a.unite(b).total_length();
    double n = a.intersect(b).total_length();
    CHECK(u <= a.total_length() + b.total_length() + 1e-12);
    CHECK(u + n == doctest::Approx(a.total_length() + b.total_length()).epsilon(1e-9));
  }
}

TEST_CASE("closed vs halfopen intersects") {
  ArcSet a = ArcSet::interval(0.5, 1.0);
  ArcSet b = ArcSet::interval(0.0, 0.2);
  // touching across the 1 ~ 0 seam
  CHECK(a.intersects_closed(b));
  CHECK_FALSE(a.intersects_halfopen(b));

  ArcSet c = ArcSet::interval(0.1, 0.3);
  ArcSet d = ArcSet::interval(0.2, 0.4);
  CHECK(c.intersects_closed(d));
  CHECK(c.intersects_halfopen(d));
}

TEST_CASE("contains conventions") {
  ArcSet s = ArcSet::interval(0.25, 0.75);
  CHECK(s.contains({0.25}));
  CHECK_FALSE(s.contains({0.75}));
  CHECK(s.contains_closed({0.75}));
  CHECK(ArcSet::full_circle().contains({0.99}));
  CHECK_FALSE(ArcSet::empty_set().contains({0.5}));
}
