#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sglab/circle.hpp"
#include "sglab/maps.hpp"
#include "sglab/recurrence.hpp"
#include "sglab/symbols.hpp"

namespace sglab {

// Interval partition of the circle, stored as its sorted cut points. The cell
// between the last cut and the first one wraps through 0.
class CirclePartition {
public:
  static CirclePartition from_boundaries(std::vector<double> cuts);
  static CirclePartition dyadic() { return from_boundaries({0.0, 0.5}); }
  static CirclePartition uniform(std::size_t cells);

  const std::vector<double>& boundaries() const { return cuts_; }
  std::size_t cell_count() const { return cuts_.empty() ? 1 : cuts_.size(); }
  std::vector<Arc> cells() const;
  std::vector<double> lengths() const;  // Lebesgue cell measures
  double entropy() const;               // -sum p log p, natural log
  bool is_uniform(double eps = kGeomEps) const;

private:
  std::vector<double> cuts_;
};

// The join beta_0^n(omega) = beta v f^-1(beta) v ... v (f_omega^{n-1})^-1(beta)
// for a word prefix of at least n-1 symbols; linear generators only.
CirclePartition refine_partition(const SemigroupSystem& s, const Word& prefix,
                                 const CirclePartition& beta, std::uint64_t n);

struct EntropyReport {
  std::vector<std::pair<std::uint64_t, double>> per_n;  // (n, (1/n) E[H])
  double extrapolated = 0.0;  // intercept of the 1/n fit through the last points
  double half_width = 0.0;
};

// Metric entropy of the action via the limit form: per n, averages
// H_nu(beta_0^n(omega)) over sampled omega-prefixes, nu = Lebesgue.
EntropyReport metric_entropy_estimate(const SemigroupSystem& s, const OmegaSpec& omega,
                                      const CirclePartition& beta,
                                      const std::vector<std::uint64_t>& n_grid,
                                      std::uint64_t M_omega, std::uint64_t seed);

struct AnalyticEntropies {
  double h_top_skew = 0.0;        // log(sum d_i)
  double h_top_action = 0.0;      // log(sum d_i / p)
  double quenched_pressure = 0.0; // sum a_i log d_i
  double walk_entropy = 0.0;      // -sum a_i log a_i
};

// Closed-form entropy quantities of an all-linear system.
AnalyticEntropies analytic_entropies(const SemigroupSystem& s, const BernoulliWalk& walk);

struct VariationalReport {
  double h_estimate = 0.0;
  EntropyReport detail;
  AnalyticEntropies analytic;
  double coarse_bound = 0.0;     // h_top_action + (log p - walk_entropy)
  double margin_coarse = 0.0;    // coarse_bound - h_estimate
  double margin_quenched = 0.0;  // quenched_pressure - h_estimate
  // symmetric walks only: strictness gap h_top_action - quenched_pressure
  std::optional<double> margin_strict;

  bool holds(double tol) const {
    return margin_coarse >= -tol && margin_quenched >= -tol;
  }
};

VariationalReport variational_check(const SemigroupSystem& s, const BernoulliWalk& walk,
                                    const std::vector<std::uint64_t>& n_grid,
                                    std::uint64_t M_omega, std::uint64_t seed);

struct LyapunovEstimate {
  double mc_mean = 0.0;
  double half_width = 0.0;  // 2 standard errors
  std::optional<double> analytic;
  std::uint64_t orbits = 0;
  std::uint64_t dropped = 0;  // orbits rejected at a derivative singularity
};

// Birkhoff averages (1/n) sum_j log|Dg_{omega_{j+1}}(f_omega^j x)| over M
// random orbits, Lebesgue starts.
LyapunovEstimate lyapunov_estimate(const SemigroupSystem& s, const BernoulliWalk& walk,
                                   std::uint64_t n, std::uint64_t M, std::uint64_t seed);

struct AbramovRokhlinReport {
  double lhs = 0.0;  // skew-product entropy from the product partition
  double rhs = 0.0;  // walk entropy + fibred entropy estimate
  double diff = 0.0;
  EntropyReport lhs_detail;
  EntropyReport fibred_detail;
};

// Exact product-partition evaluation of the skew-product entropy versus the
// sum h_P(sigma) + h_nu(action): degree-multiset classes are enumerated
// exhaustively with multinomial weights.
AbramovRokhlinReport abramov_rokhlin_check(const SemigroupSystem& s, const BernoulliWalk& walk,
                                           const CirclePartition& beta,
                                           const std::vector<std::uint64_t>& n_grid,
                                           std::uint64_t M_omega, std::uint64_t seed);

}  // namespace sglab
