#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sglab/circle.hpp"
#include "sglab/maps.hpp"
#include "sglab/rational.hpp"
#include "sglab/symbols.hpp"

namespace sglab {

// Fibered orbit (f_omega^n(x0))_{n>=0} of the skew product: step n applies the
// generator indexed by the n-th stream symbol. Optionally carries an exact
// rational arm evolved in lockstep.
class FiberedOrbit {
public:
  FiberedOrbit(const SemigroupSystem& system, SymbolStream stream, CirclePoint x0);

  void enable_exact(RationalPoint x0_exact);
  bool has_exact() const { return exact_enabled_; }

  const SemigroupSystem& system() const { return *system_; }
  const SymbolStream& stream() const { return stream_; }
  CirclePoint start() const;

  // f_omega^n(x0); n = 0 returns x0. Results are cached per orbit.
  CirclePoint point(std::uint64_t n) const;
  RationalPoint point_exact(std::uint64_t n) const;

  // True iff circle_dist(f^j(x0), f^j(y)) < delta for all 0 <= j <= n-1.
  bool dyn_ball_contains(CirclePoint y, double delta, std::uint64_t n) const;

  // The dynamical ball B_delta(x0, n) as an arc; valid for linear systems with
  // delta < 1/(max_degree + 1), where only the branch through x0 survives.
  Arc dyn_ball_arc(double delta, std::uint64_t n) const;

  // General backward-induction version over arc sets (linear and rotation
  // generators).
  ArcSet dyn_ball_set(double delta, std::uint64_t n) const;

private:
  const SemigroupSystem* system_;
  SymbolStream stream_;
  mutable std::vector<double> trace_;
  mutable std::vector<RationalPoint> exact_trace_;
  bool exact_enabled_ = false;

  void extend(std::uint64_t n) const;
  void extend_exact(std::uint64_t n) const;
};

// Preimage of an arc set under one generator (linear: k shrunken copies;
// rotation: translate back). Logistic preimages are not needed anywhere.
ArcSet preimage(const GeneratorMap& g, const ArcSet& set);

}  // namespace sglab
