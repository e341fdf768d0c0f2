#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace sglab {

// Absolute tolerance for float comparisons on circle coordinates. Exact
// rational code paths use no tolerance.
inline constexpr double kGeomEps = 1e-12;

// A point of S^1 = [0,1). coord is kept in [0,1) by every constructor-side
// normalization.
struct CirclePoint {
  double coord = 0.0;
};

// Wraps an arbitrary real into [0,1).
CirclePoint circle_point(double raw);

// min(|x-y|, 1-|x-y|); always in [0, 1/2].
double circle_dist(CirclePoint x, CirclePoint y);

// Half-open arc [start, start+length) mod 1. length == 1 denotes the full
// circle; start+length may exceed 1 (wrapping arc).
struct Arc {
  double start = 0.0;
  double length = 0.0;
};

// Arc of length min(1, 2*delta) centered at x. delta must be positive.
Arc ball(CirclePoint x, double delta);

// Finite union of pairwise-disjoint half-open arcs, normalized to a canonical
// split form: each stored arc satisfies start in [0,1), start+length <= 1,
// arcs sorted by start with gaps > kGeomEps between them.
class ArcSet {
public:
  ArcSet() = default;

  static ArcSet empty_set() { return ArcSet(); }
  static ArcSet full_circle();
  static ArcSet of(std::initializer_list<Arc> arcs);
  static ArcSet from_arcs(std::vector<Arc> arcs);
  // Convenience: single half-open arc [start, end) with start, end in [0,1];
  // wraps when end < start.
  static ArcSet interval(double start, double end);

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool is_empty() const { return arcs_.empty(); }
  bool is_full() const;
  double total_length() const;

  // Half-open membership.
  bool contains(CirclePoint p) const;
  // Closed membership with kGeomEps slack at endpoints.
  bool contains_closed(CirclePoint p) const;

  // Positive-measure overlap (half-open convention).
  bool intersects_halfopen(const ArcSet& other) const;
  // Touching endpoints count as intersecting (closed convention).
  bool intersects_closed(const ArcSet& other) const;

  ArcSet unite(const ArcSet& other) const;
  ArcSet intersect(const ArcSet& other) const;
  ArcSet rotated(double offset) const;

  bool approx_equal(const ArcSet& other, double eps = kGeomEps) const;

  // Quantized fingerprint for deduplication in word-image searches.
  std::vector<std::pair<std::int64_t, std::int64_t>> quantized_key() const;

private:
  std::vector<Arc> arcs_;
  void normalize();
};

}  // namespace sglab
