#include "sglab/circle.hpp"

#include <algorithm>
#include <cmath>

#include "sglab/error.hpp"

namespace sglab {

CirclePoint circle_point(double raw) {
  double c = raw - std::floor(raw);
  if (c >= 1.0) c = 0.0;  // raw == -eps rounds to 1.0
  return CirclePoint{c};
}

double circle_dist(CirclePoint x, CirclePoint y) {
  double d = std::fabs(x.coord - y.coord);
  return std::min(d, 1.0 - d);
}

Arc ball(CirclePoint x, double delta) {
  if (!(delta > 0.0)) fail(Errc::invalid_radius, "ball: radius must be positive");
  if (2.0 * delta >= 1.0) return Arc{0.0, 1.0};
  return Arc{circle_point(x.coord - delta).coord, 2.0 * delta};
}

ArcSet ArcSet::full_circle() {
  ArcSet s;
  s.arcs_.push_back(Arc{0.0, 1.0});
  return s;
}

ArcSet ArcSet::of(std::initializer_list<Arc> arcs) { return from_arcs(std::vector<Arc>(arcs)); }

ArcSet ArcSet::from_arcs(std::vector<Arc> arcs) {
  ArcSet s;
  s.arcs_ = std::move(arcs);
  s.normalize();
  return s;
}

ArcSet ArcSet::interval(double start, double end) {
  if (end < start) return from_arcs({Arc{start, end + 1.0 - start}});
  return from_arcs({Arc{start, end - start}});
}

void ArcSet::normalize() {
  std::vector<Arc> split;
  split.reserve(arcs_.size() + 1);
  for (const Arc& a : arcs_) {
    if (a.length <= 0.0) continue;
    if (a.length >= 1.0) {
      arcs_ = {Arc{0.0, 1.0}};
      return;
    }
    double s = circle_point(a.start).coord;
    double e = s + a.length;
    if (e <= 1.0) {
      split.push_back(Arc{s, a.length});
    } else {
      split.push_back(Arc{s, 1.0 - s});
      split.push_back(Arc{0.0, e - 1.0});
    }
  }
  std::sort(split.begin(), split.end(),
            [](const Arc& a, const Arc& b) { return a.start < b.start; });
  std::vector<Arc> merged;
  for (const Arc& a : split) {
    if (!merged.empty()) {
      Arc& last = merged.back();
      double last_end = last.start + last.length;
      if (a.start <= last_end + kGeomEps) {
        double end = std::max(last_end, a.start + a.length);
        last.length = end - last.start;
        continue;
      }
    }
    merged.push_back(a);
  }
  // The merge above may stitch the set back into full coverage.
  double merged_total = 0.0;
  for (const Arc& a : merged) merged_total += a.length;
  if (merged_total >= 1.0 - kGeomEps && merged.size() == 1) {
    arcs_ = {Arc{0.0, 1.0}};
    return;
  }
  arcs_ = std::move(merged);
}

bool ArcSet::is_full() const {
  return arcs_.size() == 1 && arcs_[0].start == 0.0 && arcs_[0].length == 1.0;
}

double ArcSet::total_length() const {
  double t = 0.0;
  for (const Arc& a : arcs_) t += a.length;
  return t;
}

bool ArcSet::contains(CirclePoint p) const {
  for (const Arc& a : arcs_) {
    if (p.coord >= a.start && p.coord < a.start + a.length) return true;
  }
  return false;
}

bool ArcSet::contains_closed(CirclePoint p) const {
  for (const Arc& a : arcs_) {
    if (p.coord >= a.start - kGeomEps && p.coord <= a.start + a.length + kGeomEps) return true;
  }
  // Endpoint wrap: an arc ending at 1 touches the point 0 and vice versa.
  if (p.coord <= kGeomEps || p.coord >= 1.0 - kGeomEps) {
    for (const Arc& a : arcs_) {
      if (a.start <= kGeomEps || a.start + a.length >= 1.0 - kGeomEps) return true;
    }
  }
  return false;
}

namespace {

double forward_gap(double from, double to) {
  double d = to - from;
  if (d < 0.0) d += 1.0;
  return d;
}

// Closed overlap of two arcs on the circle, wrap-aware.
bool closed_overlap(const Arc& a, const Arc& b) {
  if (a.length >= 1.0 || b.length >= 1.0) return true;
  if (forward_gap(a.start, b.start) <= a.length + kGeomEps) return true;
  if (forward_gap(b.start, a.start) <= b.length + kGeomEps) return true;
  return false;
}

}  // namespace

bool ArcSet::intersects_halfopen(const ArcSet& other) const {
  if (is_empty() || other.is_empty()) return false;
  if (is_full()) return true;
  if (other.is_full()) return true;
  for (const Arc& a : arcs_) {
    for (const Arc& b : other.arcs_) {
      double lo = std::max(a.start, b.start);
      double hi = std::min(a.start + a.length, b.start + b.length);
      if (hi - lo > kGeomEps) return true;
    }
  }
  return false;
}

bool ArcSet::intersects_closed(const ArcSet& other) const {
  if (is_empty() || other.is_empty()) return false;
  for (const Arc& a : arcs_) {
    for (const Arc& b : other.arcs_) {
      if (closed_overlap(a, b)) return true;
    }
  }
  return false;
}

ArcSet ArcSet::unite(const ArcSet& other) const {
  std::vector<Arc> all = arcs_;
  all.insert(all.end(), other.arcs_.begin(), other.arcs_.end());
  return from_arcs(std::move(all));
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  std::vector<Arc> out;
  for (const Arc& a : arcs_) {
    for (const Arc& b : other.arcs_) {
      double lo = std::max(a.start, b.start);
      double hi = std::min(a.start + a.length, b.start + b.length);
      if (hi - lo > 0.0) out.push_back(Arc{lo, hi - lo});
    }
  }
  return from_arcs(std::move(out));
}

ArcSet ArcSet::rotated(double offset) const {
  std::vector<Arc> out;
  out.reserve(arcs_.size());
  for (const Arc& a : arcs_) out.push_back(Arc{circle_point(a.start + offset).coord, a.length});
  return from_arcs(std::move(out));
}

bool ArcSet::approx_equal(const ArcSet& other, double eps) const {
  if (arcs_.size() != other.arcs_.size()) return false;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (std::fabs(arcs_[i].start - other.arcs_[i].start) > eps) return false;
    if (std::fabs(arcs_[i].length - other.arcs_[i].length) > eps) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, std::int64_t>> ArcSet::quantized_key() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> key;
  key.reserve(arcs_.size());
  for (const Arc& a : arcs_) {
    key.emplace_back(std::llround(a.start * 1e12), std::llround(a.length * 1e12));
  }
  return key;
}

}  // namespace sglab
