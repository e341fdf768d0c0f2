#include "sglab/orbits.hpp"

#include <cmath>

#include "sglab/error.hpp"

namespace sglab {

FiberedOrbit::FiberedOrbit(const SemigroupSystem& system, SymbolStream stream, CirclePoint x0)
    : system_(&system), stream_(std::move(stream)) {
  trace_.push_back(circle_point(x0.coord).coord);
}

void FiberedOrbit::enable_exact(RationalPoint x0_exact) {
  exact_enabled_ = true;
  exact_trace_.clear();
  exact_trace_.push_back(std::move(x0_exact));
}

CirclePoint FiberedOrbit::start() const { return CirclePoint{trace_[0]}; }

void FiberedOrbit::extend(std::uint64_t n) const {
  while (trace_.size() <= n) {
    std::uint64_t k = trace_.size() - 1;
    int sym = stream_.symbol_at(k);
    CirclePoint next = system_->gen(sym).eval(CirclePoint{trace_.back()});
    trace_.push_back(next.coord);
  }
}

void FiberedOrbit::extend_exact(std::uint64_t n) const {
  while (exact_trace_.size() <= n) {
    std::uint64_t k = exact_trace_.size() - 1;
    int sym = stream_.symbol_at(k);
    exact_trace_.push_back(system_->gen(sym).eval_exact(exact_trace_.back()));
  }
}

CirclePoint FiberedOrbit::point(std::uint64_t n) const {
  extend(n);
  return CirclePoint{trace_[n]};
}

RationalPoint FiberedOrbit::point_exact(std::uint64_t n) const {
  if (!exact_enabled_) fail(Errc::config_error, "exact arm not enabled for this orbit");
  extend_exact(n);
  return exact_trace_[n];
}

bool FiberedOrbit::dyn_ball_contains(CirclePoint y, double delta, std::uint64_t n) const {
  if (!(delta > 0.0)) fail(Errc::invalid_radius, "dynamical ball needs delta > 0");
  CirclePoint yc = circle_point(y.coord);
  for (std::uint64_t j = 0; j < n; ++j) {
    if (circle_dist(point(j), yc) >= delta) return false;
    if (j + 1 < n) yc = system_->gen(stream_.symbol_at(j)).eval(yc);
  }
  return true;
}

Arc FiberedOrbit::dyn_ball_arc(double delta, std::uint64_t n) const {
  if (!(delta > 0.0)) fail(Errc::invalid_radius, "dynamical ball needs delta > 0");
  if (n == 0) fail(Errc::config_error, "dynamical ball needs n >= 1");
  int max_deg = 0;
  for (std::uint64_t j = 0; j + 1 < n; ++j) {
    const GeneratorMap& g = system_->gen(stream_.symbol_at(j));
    if (g.kind != MapKind::linear_expanding)
      fail(Errc::unsupported_generator, "dynamical-ball arc needs linear generators");
    max_deg = std::max(max_deg, g.degree);
  }
  if (n > 1 && delta >= 1.0 / (max_deg + 1))
    fail(Errc::invalid_radius, "delta too large for the single-branch dynamical ball");
  // radius = delta / prod_{j=1}^{n-1} degree(omega_j), in log space to survive
  // long windows.
  double log_r = std::log(delta);
  for (std::uint64_t j = 0; j + 1 < n; ++j)
    log_r -= std::log(static_cast<double>(system_->gen(stream_.symbol_at(j)).degree));
  double r = std::exp(log_r);
  double len = 2.0 * r;
  if (len >= 1.0) return Arc{0.0, 1.0};
  return Arc{circle_point(trace_[0] - r).coord, len};
}

ArcSet FiberedOrbit::dyn_ball_set(double delta, std::uint64_t n) const {
  if (!(delta > 0.0)) fail(Errc::invalid_radius, "dynamical ball needs delta > 0");
  if (n == 0) fail(Errc::config_error, "dynamical ball needs n >= 1");
  ArcSet cur = ArcSet::of({ball(point(n - 1), delta)});
  for (std::uint64_t j = n - 1; j-- > 0;) {
    const GeneratorMap& g = system_->gen(stream_.symbol_at(j));
    cur = ArcSet::of({ball(point(j), delta)}).intersect(preimage(g, cur));
  }
  return cur;
}

ArcSet preimage(const GeneratorMap& g, const ArcSet& set) {
  switch (g.kind) {
    case MapKind::linear_expanding: {
      std::vector<Arc> out;
      double k = static_cast<double>(g.degree);
      for (const Arc& a : set.arcs()) {
        for (int m = 0; m < g.degree; ++m) {
          out.push_back(Arc{(a.start + m) / k, a.length / k});
        }
      }
      return ArcSet::from_arcs(std::move(out));
    }
    case MapKind::rotation:
      return set.rotated(-g.rot_alpha());
    case MapKind::logistic:
      fail(Errc::unsupported_generator, "logistic preimages are not supported");
  }
  fail(Errc::unknown_generator, "bad map kind");
}

}  // namespace sglab
