#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "sglab/circle.hpp"
#include "sglab/maps.hpp"
#include "sglab/rational.hpp"
#include "sglab/symbols.hpp"

namespace sglab {

struct HittingFrequency {
  double value = 0.0;  // limsup proxy in [0,1]
  std::uint64_t window = 0;
  std::uint64_t trajectory_id = 0;
};

// Visit frequency of the fibered orbit of x0 to A (closed membership), with the
// limsup proxied by the running maximum of c_m/m over the dyadic checkpoints
// m = window, window/2, window/4. The i = 0 term counts x0 itself.
HittingFrequency hitting_frequency(const SemigroupSystem& s, const SymbolStream& omega,
                                   CirclePoint x0, const ArcSet& A, std::uint64_t window,
                                   std::uint64_t trajectory_id = 0);

struct ExactFrequency {
  std::uint64_t hits = 0;
  std::uint64_t period = 1;
  double value() const { return static_cast<double>(hits) / static_cast<double>(period); }
};

// Uniform measure on the skew-product orbit of (w^infty, base). For pure
// logistic words the base and atoms are stored in the conjugate doubling
// parameter y (the actual point is sin^2(pi y)).
struct PeriodicOrbitMeasure {
  Word word;
  RationalPoint base;
  bool conjugate = false;
  std::vector<RationalPoint> atoms;  // orbit along the word, length = period

  std::uint64_t period() const { return atoms.size(); }
  ExactFrequency mass_in(const ArcSet& A) const;
  // positions on the circle (direct coordinates)
  std::vector<double> positions() const;
};

// All distinct periodic orbits of the pure power words label^m, m <= L.
std::vector<PeriodicOrbitMeasure> periodic_orbit_candidates(const SemigroupSystem& s, int label,
                                                            std::uint64_t L);

// One atom of a walk supported on cyclic sequences: the word and its exact
// weight.
struct SupportAtom {
  Word word;
  std::int64_t w_num = 1;
  std::int64_t w_den = 1;
};

using HittingLaw = std::variant<BernoulliWalk, std::vector<SupportAtom>>;

struct GammaResult {
  double value = 0.0;
  bool exact = false;  // attained by a periodic witness in rational arithmetic
  std::uint64_t num = 0, den = 1;
  Word witness_word;
  RationalPoint witness_point;
  bool witness_conjugate = false;
};

// Lower-bound estimator of the maximum random hitting frequency: max over
// sampled streams x an x-grid, plus all periodic-orbit candidates up to
// period L evaluated exactly.
GammaResult gamma_P_estimate(const SemigroupSystem& s, const HittingLaw& law, const ArcSet& A,
                             std::uint64_t M_omega, std::uint64_t x_grid, std::uint64_t window,
                             std::uint64_t L, std::uint64_t seed);

struct AlphaResult {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value = 0.0;
  std::vector<PeriodicOrbitMeasure> witnesses;  // one maximizer per support atom
  bool budget_hit = false;
};

// sup of mu(Sigma x A) over convex combinations of periodic-orbit measures
// whose symbol marginal matches the support weights: each atom's best orbit is
// found by exhaustive search up to period L, all in exact arithmetic.
AlphaResult alpha_P_periodic(const SemigroupSystem& s, const std::vector<SupportAtom>& support,
                             const ArcSet& A, std::uint64_t L);

struct JenkinsonWindow {
  std::uint64_t n = 1;
  std::pair<double, double> logistic_range;  // for the map 4x(1-x)
  std::pair<double, double> doubling_range;  // for the map 2x mod 1
  std::optional<std::pair<double, double>> intersection;
};

// Width ranges of the centered target interval A_l = [(1-l)/2, (1+l)/2] for
// which the maximal hitting frequency equals 1/n.
JenkinsonWindow jenkinson_window(std::uint64_t n);

// The centered interval A_l as an arc set (closed conventions applied by the
// membership predicates).
ArcSet jenkinson_arc(double ell);

struct HittingEqualityReport {
  std::uint64_t n = 1;
  double ell = 0.0;
  JenkinsonWindow window;
  bool window_ok = false;
  GammaResult gamma;
  AlphaResult alpha;
  double expected = 0.0;  // 1/n
  std::vector<std::pair<double, double>> marginal_atoms;  // (position, weight)
};

// Computes both hitting quantities on A_l and the witness marginal. ell must
// lie in the windows demanded by the generator kinds present; otherwise the
// report is returned with window_ok = false and no estimates.
HittingEqualityReport hitting_equality_check(const SemigroupSystem& s,
                                             const std::vector<SupportAtom>& support,
                                             std::uint64_t n, std::optional<double> ell,
                                             std::uint64_t window, std::uint64_t M_omega,
                                             std::uint64_t x_grid, std::uint64_t L,
                                             std::uint64_t seed);

}  // namespace sglab
