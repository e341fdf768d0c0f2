#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "sglab/circle.hpp"
#include "sglab/orbits.hpp"
#include "sglab/rational.hpp"
#include "sglab/symbols.hpp"

namespace sglab {

// A first-return search result; censoring at the step cap is a value, not an
// error.
struct ReturnTime {
  std::uint64_t value = 0;
  bool censored = false;
};

// Per-sample record for the JSONL emitters.
struct ReturnSample {
  std::uint64_t stream_id = 0;
  double x0 = 0.0;
  std::uint64_t value = 0;
  bool censored = false;
};

// How the symbol sequence is chosen per Monte Carlo sample: a fresh Bernoulli
// draw per sample, or one fixed stream shared by all samples.
using OmegaSpec = std::variant<BernoulliWalk, SymbolStream>;

// --- pointwise first return -------------------------------------------------

// Smallest k in [1, n_max] with f_omega^k(x0) in A (half-open membership).
// Return semantics expect x0 in A; pass hitting = true for arbitrary starts.
ReturnTime first_return_time(const SemigroupSystem& s, const SymbolStream& omega, CirclePoint x0,
                             const ArcSet& A, std::uint64_t n_max, bool hitting = false);

// Exact-rational arm of the same search; membership is decided by exact
// comparison against the (dyadic) arc endpoints.
ReturnTime first_return_time_exact(const SemigroupSystem& s, const SymbolStream& omega,
                                   const RationalPoint& x0, const ArcSet& A, std::uint64_t n_max,
                                   bool hitting = false);

// --- Kac estimators ----------------------------------------------------------

struct KacEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 2 standard errors
  std::uint64_t samples = 0;
  std::uint64_t censored = 0;
  double censored_fraction = 0.0;
  // censored_fraction * n_max; bounds the bias from excluded samples
  double defect_bound = 0.0;
};

// Monte Carlo mean of the first return time over M starts drawn from Lebesgue
// restricted to A (rejection sampling). Censored samples are excluded from the
// mean and reported. All-linear systems run on the exact mod-q arm.
KacEstimate kac_integral_estimate(const SemigroupSystem& s, const OmegaSpec& omega,
                                  const ArcSet& A, std::uint64_t M, std::uint64_t n_max,
                                  std::uint64_t seed, std::vector<ReturnSample>* samples_out = nullptr);

struct CesaroKac {
  std::vector<double> per_shift;  // Kac estimate along sigma^j(omega), j = 0..K-1
  std::vector<double> cesaro;     // running Cesaro means of per_shift
  double final_cesaro = 0.0;
  double unaveraged_last = 0.0;  // the K-th (unaveraged) term, mixing form
};

CesaroKac cesaro_kac(const SemigroupSystem& s, const BernoulliWalk& walk, const ArcSet& A,
                     std::uint64_t K, std::uint64_t M, std::uint64_t n_max, std::uint64_t seed);

// --- set and ball return times ----------------------------------------------

// Smallest k with f_omega^k(A) intersecting A (closed-overlap convention),
// computed by exact forward arc images.
ReturnTime set_return_time(const SemigroupSystem& s, const SymbolStream& omega, const ArcSet& A,
                           std::uint64_t n_max);

// Smallest k such that some word of length k maps B_delta(x) back onto itself:
// breadth-first search over deduplicated word images.
ReturnTime action_ball_return_time(const SemigroupSystem& s, CirclePoint x, double delta,
                                   std::uint64_t k_max);

struct DynBallRatio {
  std::uint64_t n = 0;
  ReturnTime T;
  double ratio = 0.0;  // T / n when uncensored
};

// T^omega(B_delta^omega(x, n)) / n over a grid of window lengths, along one
// fixed stream.
std::vector<DynBallRatio> dynball_return_ratio(const SemigroupSystem& s,
                                               const SymbolStream& omega, CirclePoint x,
                                               double delta, const std::vector<std::uint64_t>& n_grid,
                                               std::uint64_t n_max);

// --- recurrence rates ---------------------------------------------------------

struct RateEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<std::pair<double, std::uint64_t>> grid;  // (delta, T)
  std::uint64_t dropped = 0;                           // censored grid points
};

struct RateAggregate {
  std::vector<RateEstimate> samples;
  double mean_slope = 0.0;
  double stddev_slope = 0.0;
  double min_slope = 0.0;
  double max_slope = 0.0;
  double q10 = 0.0, q50 = 0.0, q90 = 0.0;
  std::uint64_t fully_resolved = 0;  // samples with no dropped grid point
};

struct DeltaGrid {
  double delta0 = 0.1;
  double ratio = 0.5;
  std::uint32_t points = 12;

  std::vector<double> values() const;
};

// Per-(omega, x) least-squares slope of T^omega(B_delta(x)) against -log delta
// over a geometric delta grid, aggregated over Monte Carlo samples. Samples
// are independent tasks; the reduce is ordered by sample index, so any worker
// count yields identical output.
RateAggregate recurrence_rate(const SemigroupSystem& s, const BernoulliWalk& walk,
                              const DeltaGrid& grid, std::uint64_t samples, std::uint64_t k_max,
                              std::uint64_t seed, unsigned workers = 1);

// --- recurrence verification --------------------------------------------------

struct RecurrenceReport {
  double fraction_returning = 0.0;
  std::uint64_t samples = 0;
  // fixed-omega mode only: fraction with a return along some shifted window
  // sigma^{k-1}(omega), k <= window
  std::optional<double> fraction_shifted_window;
};

RecurrenceReport verify_recurrence(const SemigroupSystem& s, const OmegaSpec& omega,
                                   const ArcSet& A, std::uint64_t M, std::uint64_t n_max,
                                   std::uint64_t seed, std::uint64_t shift_window = 16,
                                   std::vector<ReturnSample>* samples_out = nullptr);

// --- rotation semigroups --------------------------------------------------------

struct RotationBoundEntry {
  double x = 0.0;
  double delta = 0.0;
  std::uint64_t T = 0;
  double bound = 0.0;
};

struct RotationBoundReport {
  bool all_hold = true;
  double worst_margin = 0.0;  // max T / bound
  std::vector<RotationBoundEntry> entries;
};

// Checks T^S(B_delta(x)) <= (1/alpha_max + 1) / delta over sampled x and the
// delta grid, using the BFS oracle.
RotationBoundReport rotation_ball_bound_check(const SemigroupSystem& rotations,
                                              const std::vector<double>& delta_grid,
                                              std::uint64_t x_samples, std::uint64_t seed);

}  // namespace sglab
