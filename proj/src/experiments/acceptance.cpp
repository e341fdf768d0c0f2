#include "sglab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "sglab/entropy.hpp"
#include "sglab/hitting.hpp"
#include "sglab/kernels.hpp"
#include "sglab/recurrence.hpp"
#include "sglab/rng.hpp"

namespace sglab {

namespace {

constexpr std::uint64_t kSeed = 7;
const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);

struct Criterion {
  int id;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

using Clock = std::chrono::steady_clock;

std::string fp(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Criterion c1_kac_single(bool quick) {
  Criterion c{1, "Kac mean return time, single doubling map"};
  auto t0 = Clock::now();
  std::uint64_t M = quick ? 100'000 : 1'000'000;
  SemigroupSystem sys = parse_system("linear:2");
  KacEstimate est = kac_integral_estimate(sys, OmegaSpec(SymbolStream::cyclic(Word::parse("1"))),
                                          ArcSet::interval(0.0, 0.5), M, 10'000, kSeed);
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = est.mean >= 1.96 && est.mean <= 2.04 && c.seconds < 30.0;
  c.detail = "mean " + fp(est.mean) + " target [1.96, 2.04], censored " +
             std::to_string(est.censored) + ", " + fp(c.seconds) + " s";
  return c;
}

Criterion c2_cesaro(bool quick) {
  Criterion c{2, "Cesaro-Kac over shifted sequences, {2x,3x}"};
  auto t0 = Clock::now();
  std::uint64_t K = quick ? 60 : 200;
  std::uint64_t M = quick ? 2'500 : 10'000;
  SemigroupSystem sys = parse_system("linear:2,linear:3");
  CesaroKac ck =
      cesaro_kac(sys, BernoulliWalk({0.5, 0.5}), ArcSet::interval(0.0, 0.25), K, M, 10'000, kSeed);
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = ck.final_cesaro >= 3.85 && ck.final_cesaro <= 4.15 && c.seconds < 300.0;
  c.detail = "final Cesaro " + fp(ck.final_cesaro) + " target [3.85, 4.15], unaveraged tail " +
             fp(ck.unaveraged_last) + ", " + fp(c.seconds) + " s";
  return c;
}

Criterion c3_recurrence(bool quick) {
  Criterion c{3, "almost-sure recurrence, Bernoulli and adversarial sequences"};
  auto t0 = Clock::now();
  std::uint64_t M = quick ? 10'000 : 100'000;
  SemigroupSystem sys = parse_system("linear:2,linear:3");
  ArcSet A = ArcSet::interval(0.0, 0.1);
  RecurrenceReport random_omega =
      verify_recurrence(sys, OmegaSpec(BernoulliWalk({0.5, 0.5})), A, M, 1'000, kSeed);
  RecurrenceReport fixed_omega = verify_recurrence(
      sys, OmegaSpec(SymbolStream::cyclic(Word::parse("12"))), A, M, 1'000, kSeed);
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = random_omega.fraction_returning >= 0.999 && fixed_omega.fraction_returning >= 0.999 &&
           c.seconds < 60.0;
  c.detail = "fractions " + fp(random_omega.fraction_returning) + " (Bernoulli), " +
             fp(fixed_omega.fraction_returning) + " (cyclic 12), threshold 0.999, " +
             fp(c.seconds) + " s";
  return c;
}

Criterion c4_rate(bool quick) {
  Criterion c{4, "ball return rate: slope of T(B_delta(x)) against -log delta"};
  auto t0 = Clock::now();
  std::uint64_t samples = quick ? 50 : 200;
  SemigroupSystem sys = parse_system("linear:2,linear:3");
  DeltaGrid grid{0.1, 0.5, 13};  // delta_j = 0.1 * 2^-j, j = 0..12
  RateAggregate agg =
      recurrence_rate(sys, BernoulliWalk({0.5, 0.5}), grid, samples, 60, kSeed);
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  bool mean_ok = agg.mean_slope >= 1.06 && agg.mean_slope <= 1.17;
  double band_lo = 1.0 / kLog3 - 0.05, band_hi = 1.0 / kLog2 + 0.05;
  std::uint64_t out_of_band = 0, resolved = 0;
  for (const RateEstimate& est : agg.samples) {
    if (est.grid.size() < 3 || est.dropped > 0) continue;
    ++resolved;
    if (est.slope < band_lo || est.slope > band_hi) ++out_of_band;
  }
  bool band_ok = out_of_band == 0;
  c.pass = mean_ok && band_ok && c.seconds < 600.0;
  c.detail = "mean slope " + fp(agg.mean_slope) + " target [1.06, 1.17] (" +
             std::string(mean_ok ? "ok" : "FAIL") + "); per-sample band [" + fp(band_lo) + ", " +
             fp(band_hi) + "]: " + std::to_string(out_of_band) + "/" + std::to_string(resolved) +
             " outside (" + std::string(band_ok ? "ok" : "FAIL") + "), " + fp(c.seconds) + " s";
  return c;
}

Criterion c5_action_bound(bool quick) {
  Criterion c{5, "semigroup ball return bounded by 1/log(min degree)"};
  auto t0 = Clock::now();
  std::uint64_t samples = quick ? 25 : 100;
  SemigroupSystem sys = parse_system("linear:2,linear:3");
  const double delta = std::pow(2.0, -16.0);
  const double denom = -std::log(delta);
  const double bound = 1.0 / kLog2 + 0.05;
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t i = 0; i < samples; ++i) {
    double x = CounterRng(kSeed, stream_salt::point + i).uniform_at(0);
    ReturnTime T = action_ball_return_time(sys, {x}, delta, 60);
    double ratio = static_cast<double>(T.value) / denom;
    worst = std::max(worst, ratio);
    ok = ok && !T.censored && ratio <= bound;
  }
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = ok;
  c.detail = "worst T/(-log delta) " + fp(worst) + " <= " + fp(bound) + " over " +
             std::to_string(samples) + " samples, " + fp(c.seconds) + " s";
  return c;
}

Criterion c6_dynball(bool quick) {
  Criterion c{6, "dynamical-ball return ratio near one"};
  auto t0 = Clock::now();
  std::uint64_t samples = quick ? 15 : 50;
  SemigroupSystem sys = parse_system("linear:2,linear:3");
  BernoulliWalk walk({0.5, 0.5});
  std::uint64_t in_band = 0;
  double worst_lo = 10.0, worst_hi = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    SymbolStream omega = SymbolStream::sampled(walk, kSeed, stream_salt::omega + i);
    double x = CounterRng(kSeed, stream_salt::point + i).uniform_at(0);
    auto rows = dynball_return_ratio(sys, omega, {x}, 0.01, {200}, 1'200);
    double r = rows[0].T.censored ? 0.0 : rows[0].ratio;
    worst_lo = std::min(worst_lo, r);
    worst_hi = std::max(worst_hi, r);
    if (!rows[0].T.censored && r >= 1.0 && r <= 1.2) ++in_band;
  }
  double frac = static_cast<double>(in_band) / static_cast<double>(samples);
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = frac >= 0.9;
  c.detail = fp(frac * 100.0) + "% of ratios in [1.0, 1.2] (need >= 90%), observed range [" +
             fp(worst_lo) + ", " + fp(worst_hi) + "], " + fp(c.seconds) + " s";
  return c;
}

Criterion c7_entropy(bool quick) {
  Criterion c{7, "entropy: analytic values, estimator, variational margins"};
  auto t0 = Clock::now();
  SemigroupSystem sys = parse_system("linear:2,linear:3");
  BernoulliWalk walk({0.5, 0.5});
  AnalyticEntropies a = analytic_entropies(sys, walk);
  bool exact_ok = std::fabs(a.h_top_skew - std::log(5.0)) <= 1e-12 &&
                  std::fabs(a.h_top_action - std::log(2.5)) <= 1e-12 &&
                  std::fabs(a.quenched_pressure - 0.5 * (kLog2 + kLog3)) <= 1e-12 &&
                  std::fabs(a.walk_entropy - kLog2) <= 1e-12;

  std::uint64_t M_omega = quick ? 120 : 500;
  VariationalReport rep =
      variational_check(sys, walk, {4, 6, 8, 10, 12, 14}, M_omega, kSeed);
  bool est_ok = std::fabs(rep.h_estimate - 0.8959) <= 0.05;
  bool chain_ok = rep.h_estimate <= a.h_top_action + 0.02 &&
                  a.quenched_pressure <= a.h_top_action + 1e-12 &&
                  a.h_top_action <= rep.coarse_bound + 1e-12;
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = exact_ok && est_ok && chain_ok && c.seconds < 120.0;
  c.detail = "analytic (" + fp(a.h_top_skew) + ", " + fp(a.h_top_action) + ", " +
             fp(a.quenched_pressure) + ", " + fp(a.walk_entropy) + ") exact=" +
             (exact_ok ? "ok" : "FAIL") + "; estimate " + fp(rep.h_estimate) +
             " vs 0.8959 +- 0.05; chain " + (chain_ok ? "ok" : "FAIL") + ", " + fp(c.seconds) +
             " s";
  return c;
}

Criterion c8_lyapunov(bool quick) {
  Criterion c{8, "Lyapunov exponents match the weighted log-degrees"};
  auto t0 = Clock::now();
  std::uint64_t n = quick ? 2'000 : 10'000;
  std::uint64_t M = quick ? 200 : 1'000;
  SemigroupSystem sys = parse_system("linear:2,linear:3");
  LyapunovEstimate skew = lyapunov_estimate(sys, BernoulliWalk({0.25, 0.75}), n, M, kSeed);
  LyapunovEstimate sym = lyapunov_estimate(sys, BernoulliWalk({0.5, 0.5}), n, M, kSeed);
  double target_skew = 0.25 * kLog2 + 0.75 * kLog3;  // 0.997246
  double target_sym = 0.5 * (kLog2 + kLog3);         // 0.895880
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = std::fabs(skew.mc_mean - target_skew) <= 0.01 &&
           std::fabs(sym.mc_mean - target_sym) <= 0.01;
  c.detail = "estimates " + fp(skew.mc_mean) + " vs " + fp(target_skew) + " and " +
             fp(sym.mc_mean) + " vs " + fp(target_sym) + " (tolerance 0.01), " + fp(c.seconds) +
             " s";
  return c;
}

Criterion c9_hitting(bool quick) {
  Criterion c{9, "hitting frequencies: gamma = alpha = 1/n on the width windows"};
  auto t0 = Clock::now();
  std::uint64_t L = 12;
  std::uint64_t window = quick ? 1'024 : 4'096;

  SemigroupSystem both = parse_system("logistic,linear:2");
  std::vector<SupportAtom> mixed = {{Word::parse("1"), 1, 3}, {Word::parse("2"), 2, 3}};
  HittingEqualityReport r2 =
      hitting_equality_check(both, mixed, 2, 0.32, window, quick ? 8 : 16, 32, L, kSeed);
  bool ok2 = r2.window_ok && r2.alpha.num == 1 && r2.alpha.den == 2 && r2.gamma.exact &&
             r2.gamma.num == 1 && r2.gamma.den == 2;

  SemigroupSystem dbl = parse_system("linear:2");
  std::vector<SupportAtom> pure = {{Word::parse("1"), 1, 1}};
  HittingEqualityReport r3 =
      hitting_equality_check(dbl, pure, 3, std::nullopt, window, quick ? 8 : 16, 32, L, kSeed);
  bool ok3 = r3.window_ok && r3.alpha.num == 1 && r3.alpha.den == 3 && r3.gamma.exact &&
             r3.gamma.num == 1 && r3.gamma.den == 3;

  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = ok2 && ok3 && c.seconds < 180.0;
  c.detail = "n=2 (ell 0.32): alpha " + std::to_string(r2.alpha.num) + "/" +
             std::to_string(r2.alpha.den) + ", gamma " + fp(r2.gamma.value) + "; n=3 (ell " +
             fp(r3.ell) + "): alpha " + std::to_string(r3.alpha.num) + "/" +
             std::to_string(r3.alpha.den) + ", gamma " + fp(r3.gamma.value) + ", " +
             fp(c.seconds) + " s";
  return c;
}

// --- criterion 10 helpers ----------------------------------------------------

struct DyadicSet {
  std::vector<std::pair<int, int>> arcs64;  // [lo/64, hi/64), hi <= 64
  ArcSet as_arcset() const {
    std::vector<Arc> arcs;
    for (auto [lo, hi] : arcs64)
      arcs.push_back(Arc{static_cast<double>(lo) / 64.0, static_cast<double>(hi - lo) / 64.0});
    return ArcSet::from_arcs(std::move(arcs));
  }
};

// T(A) on the 2^14 grid: smallest k such that some grid point of closure(A)
// maps into closure(A) after k steps. The grid is invariant under the integer
// maps, and all arc endpoints lie on it, so this equals the closed-overlap
// arc-image value exactly.
ReturnTime grid_set_return(const SemigroupSystem& s, const SymbolStream& omega,
                           const DyadicSet& dy, std::uint64_t n_max) {
  constexpr std::uint32_t N = 1u << 14;  // 256 per 1/64 cell
  auto in_closure = [&](std::uint32_t v) {
    for (auto [lo, hi] : dy.arcs64) {
      std::uint32_t glo = static_cast<std::uint32_t>(lo) << 8;
      std::uint32_t ghi = static_cast<std::uint32_t>(hi) << 8;
      if (v >= glo && v <= ghi) return true;
      if (ghi == N && v == 0) return true;  // endpoint 1 ~ 0
    }
    return false;
  };
  std::vector<std::uint32_t> pts;
  for (std::uint32_t v = 0; v < N; ++v)
    if (in_closure(v)) pts.push_back(v);
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    auto deg = static_cast<std::uint32_t>(s.gen(omega.symbol_at(k - 1)).degree);
    for (std::uint32_t& v : pts) v = (v * deg) & (N - 1);
    for (std::uint32_t v : pts)
      if (in_closure(v)) return {k, false};
  }
  return {n_max, true};
}

Criterion c10_oracle(bool quick) {
  Criterion c{10, "oracle equivalence: arc images vs grid, float vs rational"};
  auto t0 = Clock::now();
  std::vector<std::string> systems = {"linear:2",          "linear:3",
                                      "linear:2,linear:3", "linear:3,linear:2",
                                      "linear:2,linear:2", "linear:3,linear:3"};
  std::vector<DyadicSet> sets = {
      {{{0, 32}}}, {{{0, 16}}}, {{{24, 40}}}, {{{1, 9}}}, {{{0, 8}, {32, 40}}}, {{{31, 33}}}};
  if (quick) sets.resize(3);

  std::uint64_t mismatches = 0, checked = 0;
  for (const std::string& spec : systems) {
    SemigroupSystem sys = parse_system(spec);
    std::vector<Word> words;
    if (sys.p() == 1) {
      words.push_back(Word::parse("1"));
    } else {
      std::uint64_t max_len = quick ? 3 : 4;
      for (std::uint64_t len = 1; len <= max_len; ++len) {
        for (std::uint64_t code = 0; code < (1ull << len); ++code) {
          Word w;
          for (std::uint64_t j = 0; j < len; ++j)
            w.symbols.push_back(static_cast<int>((code >> j) & 1) + 1);
          words.push_back(w);
        }
      }
      // longer pseudo-random words up to length 10
      CounterRng rng(kSeed, 0xabc);
      for (int t = 0; t < (quick ? 2 : 8); ++t) {
        Word w;
        std::uint64_t len = 6 + rng.below_at(static_cast<std::uint64_t>(t), 5);
        for (std::uint64_t j = 0; j < len; ++j)
          w.symbols.push_back(
              static_cast<int>(rng.below_at(1000 + 10 * static_cast<std::uint64_t>(t) + j, 2)) +
              1);
        words.push_back(w);
      }
    }
    for (const Word& w : words) {
      SymbolStream omega = SymbolStream::cyclic(w);
      for (const DyadicSet& dy : sets) {
        ReturnTime via_arcs = set_return_time(sys, omega, dy.as_arcset(), 64);
        ReturnTime via_grid = grid_set_return(sys, omega, dy, 64);
        ++checked;
        if (via_arcs.value != via_grid.value || via_arcs.censored != via_grid.censored)
          ++mismatches;
      }
    }

    // float vs exact pointwise first returns; margins keep every orbit point
    // at least 1/(64 * 65537) away from the dyadic endpoints while the float
    // error stays below it for these step counts
    bool has3 = spec.find('3') != std::string::npos;
    std::uint64_t n_max = has3 ? 16 : 28;
    for (const Word& w : {words.front(), words.back()}) {
      SymbolStream omega = SymbolStream::cyclic(w);
      for (std::size_t si = 0; si < (quick ? 2u : 3u); ++si) {
        ArcSet A = sets[si].as_arcset();
        for (std::int64_t q = 1; q < 200; q += quick ? 13 : 3) {
          RationalPoint x(q, 65537);
          ReturnTime ex = first_return_time_exact(sys, omega, x, A, n_max, true);
          ReturnTime fl = first_return_time(sys, omega, {x.to_double()}, A, n_max, true);
          ++checked;
          if (ex.value != fl.value || ex.censored != fl.censored) ++mismatches;
        }
      }
    }
  }
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = mismatches == 0;
  c.detail = std::to_string(checked) + " comparisons, " + std::to_string(mismatches) +
             " mismatches (exact integer equality required), " + fp(c.seconds) + " s";
  return c;
}

Criterion c11_invariance(bool quick) {
  Criterion c{11, "Lebesgue invariance of the linear generators (KS distance)"};
  auto t0 = Clock::now();
  std::uint64_t N = quick ? 100'000 : 1'000'000;
  double threshold = 2.0 / std::sqrt(static_cast<double>(N));
  double worst = 0.0;
  const kernels::Ops& K = kernels::active();
  for (int deg : {2, 3}) {
    std::vector<double> x(N);
    CounterRng rng(kSeed, stream_salt::aux + static_cast<std::uint64_t>(deg));
    for (std::uint64_t i = 0; i < N; ++i) x[i] = rng.uniform_at(i);
    K.step_linear(x.data(), N, static_cast<double>(deg));
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (std::uint64_t i = 0; i < N; ++i) {
      double hi = static_cast<double>(i + 1) / static_cast<double>(N) - x[i];
      double lo = x[i] - static_cast<double>(i) / static_cast<double>(N);
      d = std::max(d, std::max(hi, lo));
    }
    worst = std::max(worst, d);
  }
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.pass = worst < threshold;
  c.detail = "worst KS distance " + fp(worst) + " < " + fp(threshold) + ", " + fp(c.seconds) +
             " s";
  return c;
}

}  // namespace

int run_acceptance(bool quick, std::ostream& out) {
  out << "acceptance suite (" << (quick ? "quick" : "full") << ", kernels: "
      << kernels::active().name << ")\n";
  std::vector<Criterion> results;
  results.push_back(c1_kac_single(quick));
  results.push_back(c2_cesaro(quick));
  results.push_back(c3_recurrence(quick));
  results.push_back(c4_rate(quick));
  results.push_back(c5_action_bound(quick));
  results.push_back(c6_dynball(quick));
  results.push_back(c7_entropy(quick));
  results.push_back(c8_lyapunov(quick));
  results.push_back(c9_hitting(quick));
  results.push_back(c10_oracle(quick));
  results.push_back(c11_invariance(quick));

  int failures = 0;
  for (const Criterion& c : results) {
    bool ok = c.pass;
    failures += ok ? 0 : 1;
    out << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.title << " -- "
        << c.detail << "\n";
  }
  out << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED")
      << "\n";
  return failures;
}

}  // namespace sglab
