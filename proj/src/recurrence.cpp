#include "sglab/recurrence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "sglab/error.hpp"
#include "sglab/kernels.hpp"
#include "sglab/rng.hpp"

namespace sglab {

namespace {

// Fixed denominator of the exact Monte Carlo arm. Odd, so multiplication by 2
// permutes residues and expanding orbits never collapse onto a short cycle of
// the float representation.
constexpr std::uint64_t kQ = 0xFFFFFFFFull;  // 2^32 - 1

std::vector<kernels::RangeU64> to_ranges(const ArcSet& A) {
  std::vector<kernels::RangeU64> r;
  for (const Arc& a : A.arcs()) {
    if (a.length >= 1.0) {
      r.push_back({0, kQ});
      continue;
    }
    auto lo = static_cast<std::uint64_t>(std::ceil(a.start * static_cast<double>(kQ)));
    auto hi = static_cast<std::uint64_t>(
        std::ceil((a.start + a.length) * static_cast<double>(kQ)));
    hi = std::min(hi, kQ);
    if (hi > lo) r.push_back({lo, hi});
  }
  return r;
}

std::uint64_t draw_in_ranges(RngCursor& rng, const std::vector<kernels::RangeU64>& ranges) {
  for (int tries = 0; tries < 10'000'000; ++tries) {
    std::uint64_t v = rng.next_below(kQ);
    for (const auto& r : ranges) {
      if (v >= r.lo && v < r.hi) return v;
    }
  }
  fail(Errc::estimate_undefined, "rejection sampler failed to hit the target set");
}

double draw_in_set(RngCursor& rng, const ArcSet& A) {
  for (int tries = 0; tries < 10'000'000; ++tries) {
    double v = rng.next_uniform();
    if (A.contains({v})) return v;
  }
  fail(Errc::estimate_undefined, "rejection sampler failed to hit the target set");
}

struct BatchSymbols {
  enum class Mode { fixed, bernoulli } mode;
  const SymbolStream* fixed = nullptr;
  const BernoulliWalk* walk = nullptr;
  std::uint64_t seed = 0;
  std::uint64_t salt = 0;
};

struct BatchOut {
  std::vector<std::uint64_t> value;
  std::vector<std::uint8_t> censored;
};

// Batched first-return search on the exact mod-q arm; lanes are compacted as
// they return, results keyed by the original sample index.
BatchOut modq_first_return(const SemigroupSystem& s, const std::vector<std::uint64_t>& starts,
                           const BatchSymbols& syms, const std::vector<kernels::RangeU64>& target,
                           std::uint64_t n_max) {
  const kernels::Ops& K = kernels::active();
  const std::size_t M = starts.size();
  BatchOut out{std::vector<std::uint64_t>(M, n_max), std::vector<std::uint8_t>(M, 1)};

  std::vector<std::uint32_t> deg(s.p() + 1, 0);
  for (std::size_t i = 1; i <= s.p(); ++i)
    deg[i] = static_cast<std::uint32_t>(s.gen(static_cast<int>(i)).degree);

  std::vector<std::uint64_t> x = starts;
  std::vector<std::uint64_t> orig(M);
  std::iota(orig.begin(), orig.end(), std::uint64_t{0});
  std::vector<std::uint8_t> sym(M), mask(M);
  std::size_t active = M;

  for (std::uint64_t k = 1; k <= n_max && active > 0; ++k) {
    if (syms.mode == BatchSymbols::Mode::fixed) {
      int ssym = syms.fixed->symbol_at(k - 1);
      K.step_modq(x.data(), active, deg[static_cast<std::size_t>(ssym)], kQ);
    } else {
      for (std::size_t i = 0; i < active; ++i) {
        double u = CounterRng(syms.seed, syms.salt + orig[i]).uniform_at(k - 1);
        sym[i] = static_cast<std::uint8_t>(syms.walk->sample(u));
      }
      K.step_modq_table(x.data(), sym.data(), active, deg.data(), kQ);
    }
    K.mask_in_ranges(x.data(), active, target.data(), target.size(), mask.data());
    std::size_t w = 0;
    for (std::size_t i = 0; i < active; ++i) {
      if (mask[i]) {
        out.value[orig[i]] = k;
        out.censored[orig[i]] = 0;
      } else {
        x[w] = x[i];
        orig[w] = orig[i];
        ++w;
      }
    }
    active = w;
  }
  return out;
}

// Scalar float fallback for systems with non-linear generators.
BatchOut float_first_return(const SemigroupSystem& s, const std::vector<double>& starts,
                            const BatchSymbols& syms, const ArcSet& A, std::uint64_t n_max) {
  const std::size_t M = starts.size();
  BatchOut out{std::vector<std::uint64_t>(M, n_max), std::vector<std::uint8_t>(M, 1)};
  for (std::size_t i = 0; i < M; ++i) {
    CirclePoint x{starts[i]};
    for (std::uint64_t k = 1; k <= n_max; ++k) {
      int sym;
      if (syms.mode == BatchSymbols::Mode::fixed) {
        sym = syms.fixed->symbol_at(k - 1);
      } else {
        double u = CounterRng(syms.seed, syms.salt + i).uniform_at(k - 1);
        sym = syms.walk->sample(u);
      }
      x = s.gen(sym).eval(x);
      if (A.contains(x)) {
        out.value[i] = k;
        out.censored[i] = 0;
        break;
      }
    }
  }
  return out;
}

KacEstimate summarize(const BatchOut& batch, std::uint64_t n_max) {
  KacEstimate est;
  est.samples = batch.value.size();
  double sum = 0.0, sq = 0.0;
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < batch.value.size(); ++i) {
    if (batch.censored[i]) {
      ++est.censored;
      continue;
    }
    double v = static_cast<double>(batch.value[i]);
    sum += v;
    sq += v * v;
    ++used;
  }
  if (used == 0) fail(Errc::estimate_undefined, "all samples censored");
  est.mean = sum / static_cast<double>(used);
  if (used > 1) {
    double var = (sq - sum * sum / static_cast<double>(used)) / static_cast<double>(used - 1);
    est.half_width = 2.0 * std::sqrt(std::max(0.0, var) / static_cast<double>(used));
  }
  est.censored_fraction =
      static_cast<double>(est.censored) / static_cast<double>(est.samples);
  est.defect_bound = est.censored_fraction * static_cast<double>(n_max);
  return est;
}

double linear_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                    double* intercept, double* r2) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  double slope = sxy / sxx;
  if (intercept) *intercept = my - slope * mx;
  if (r2) *r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return slope;
}

}  // namespace

ReturnTime first_return_time(const SemigroupSystem& s, const SymbolStream& omega, CirclePoint x0,
                             const ArcSet& A, std::uint64_t n_max, bool hitting) {
  (void)hitting;  // the search is identical; the flag documents intent at call sites
  CirclePoint x = circle_point(x0.coord);
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    x = s.gen(omega.symbol_at(k - 1)).eval(x);
    if (A.contains(x)) return {k, false};
  }
  return {n_max, true};
}

ReturnTime first_return_time_exact(const SemigroupSystem& s, const SymbolStream& omega,
                                   const RationalPoint& x0, const ArcSet& A, std::uint64_t n_max,
                                   bool hitting) {
  (void)hitting;
  RationalPoint x = x0;
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    x = s.gen(omega.symbol_at(k - 1)).eval_exact(x);
    if (arcset_contains_exact(A, x)) return {k, false};
  }
  return {n_max, true};
}

KacEstimate kac_integral_estimate(const SemigroupSystem& s, const OmegaSpec& omega,
                                  const ArcSet& A, std::uint64_t M, std::uint64_t n_max,
                                  std::uint64_t seed, std::vector<ReturnSample>* samples_out) {
  if (A.is_empty() || A.total_length() <= 0.0)
    fail(Errc::estimate_undefined, "target set has zero length");

  BatchSymbols syms;
  if (std::holds_alternative<BernoulliWalk>(omega)) {
    syms.mode = BatchSymbols::Mode::bernoulli;
    syms.walk = &std::get<BernoulliWalk>(omega);
    syms.seed = seed;
    syms.salt = stream_salt::omega;
  } else {
    syms.mode = BatchSymbols::Mode::fixed;
    syms.fixed = &std::get<SymbolStream>(omega);
  }

  BatchOut batch;
  std::vector<double> x0_for_record(M);
  if (s.all_linear()) {
    auto ranges = to_ranges(A);
    if (ranges.empty()) fail(Errc::estimate_undefined, "target set has zero length");
    std::vector<std::uint64_t> starts(M);
    for (std::uint64_t i = 0; i < M; ++i) {
      RngCursor rng(seed, stream_salt::point + i);
      starts[i] = draw_in_ranges(rng, ranges);
      x0_for_record[i] = static_cast<double>(starts[i]) / static_cast<double>(kQ);
    }
    batch = modq_first_return(s, starts, syms, ranges, n_max);
  } else {
    std::vector<double> starts(M);
    for (std::uint64_t i = 0; i < M; ++i) {
      RngCursor rng(seed, stream_salt::point + i);
      starts[i] = draw_in_set(rng, A);
      x0_for_record[i] = starts[i];
    }
    batch = float_first_return(s, starts, syms, A, n_max);
  }

  if (samples_out) {
    samples_out->reserve(samples_out->size() + M);
    for (std::uint64_t i = 0; i < M; ++i) {
      samples_out->push_back(
          {i, x0_for_record[i], batch.value[i], batch.censored[i] != 0});
    }
  }
  return summarize(batch, n_max);
}

CesaroKac cesaro_kac(const SemigroupSystem& s, const BernoulliWalk& walk, const ArcSet& A,
                     std::uint64_t K, std::uint64_t M, std::uint64_t n_max, std::uint64_t seed) {
  if (K == 0) fail(Errc::config_error, "cesaro_kac needs K >= 1");
  SymbolStream omega = SymbolStream::sampled(walk, seed, stream_salt::omega);
  auto ranges = to_ranges(A);
  const bool linear = s.all_linear();
  if (linear && ranges.empty()) fail(Errc::estimate_undefined, "target set has zero length");

  CesaroKac out;
  double running = 0.0;
  for (std::uint64_t j = 0; j <= K; ++j) {
    SymbolStream shifted = omega.shifted(j);
    BatchSymbols syms{BatchSymbols::Mode::fixed, &shifted, nullptr, 0, 0};
    BatchOut batch;
    if (linear) {
      std::vector<std::uint64_t> starts(M);
      for (std::uint64_t i = 0; i < M; ++i) {
        RngCursor rng(seed, stream_salt::point + (j << 34) + i);
        starts[i] = draw_in_ranges(rng, ranges);
      }
      batch = modq_first_return(s, starts, syms, ranges, n_max);
    } else {
      std::vector<double> starts(M);
      for (std::uint64_t i = 0; i < M; ++i) {
        RngCursor rng(seed, stream_salt::point + (j << 34) + i);
        starts[i] = draw_in_set(rng, A);
      }
      batch = float_first_return(s, starts, syms, A, n_max);
    }
    double mean = summarize(batch, n_max).mean;
    if (j < K) {
      out.per_shift.push_back(mean);
      running += mean;
      out.cesaro.push_back(running / static_cast<double>(j + 1));
    } else {
      out.unaveraged_last = mean;
    }
  }
  out.final_cesaro = out.cesaro.back();
  return out;
}

ReturnTime set_return_time(const SemigroupSystem& s, const SymbolStream& omega, const ArcSet& A,
                           std::uint64_t n_max) {
  if (A.is_empty()) fail(Errc::estimate_undefined, "set return time of the empty set");
  ArcSet cur = A;
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    const GeneratorMap& g = s.gen(omega.symbol_at(k - 1));
    std::vector<Arc> pieces;
    for (const Arc& a : cur.arcs()) {
      ArcSet img = g.arc_image(a);
      pieces.insert(pieces.end(), img.arcs().begin(), img.arcs().end());
    }
    cur = ArcSet::from_arcs(std::move(pieces));
    if (cur.intersects_closed(A)) return {k, false};
  }
  return {n_max, true};
}

ReturnTime action_ball_return_time(const SemigroupSystem& s, CirclePoint x, double delta,
                                   std::uint64_t k_max) {
  ArcSet B = ArcSet::of({ball(x, delta)});
  using Key = std::vector<std::pair<std::int64_t, std::int64_t>>;
  std::map<Key, bool> seen;
  std::vector<ArcSet> frontier = {B};
  seen[B.quantized_key()] = true;
  constexpr std::size_t kFrontierBudget = 1 << 16;

  for (std::uint64_t k = 1; k <= k_max && !frontier.empty(); ++k) {
    std::vector<ArcSet> next;
    for (const ArcSet& cur : frontier) {
      for (const GeneratorMap& g : s.generators) {
        std::vector<Arc> pieces;
        for (const Arc& a : cur.arcs()) {
          ArcSet piece = g.arc_image(a);
          pieces.insert(pieces.end(), piece.arcs().begin(), piece.arcs().end());
        }
        ArcSet img = ArcSet::from_arcs(std::move(pieces));
        if (img.intersects_closed(B)) return {k, false};
        Key key = img.quantized_key();
        if (!seen.emplace(std::move(key), true).second) continue;
        next.push_back(std::move(img));
        if (next.size() > kFrontierBudget)
          fail(Errc::search_budget, "action ball search frontier exceeded budget");
      }
    }
    frontier = std::move(next);
  }
  return {k_max, true};
}

std::vector<DynBallRatio> dynball_return_ratio(const SemigroupSystem& s,
                                               const SymbolStream& omega, CirclePoint x,
                                               double delta,
                                               const std::vector<std::uint64_t>& n_grid,
                                               std::uint64_t n_max) {
  FiberedOrbit orbit(s, omega, x);
  std::vector<DynBallRatio> out;
  out.reserve(n_grid.size());
  for (std::uint64_t n : n_grid) {
    Arc b = orbit.dyn_ball_arc(delta, n);
    ReturnTime T = set_return_time(s, omega, ArcSet::of({b}), n_max);
    DynBallRatio row;
    row.n = n;
    row.T = T;
    row.ratio = T.censored ? 0.0 : static_cast<double>(T.value) / static_cast<double>(n);
    out.push_back(row);
  }
  return out;
}

std::vector<double> DeltaGrid::values() const {
  std::vector<double> v;
  double d = delta0;
  for (std::uint32_t j = 0; j < points; ++j) {
    v.push_back(d);
    d *= ratio;
  }
  return v;
}

RateAggregate recurrence_rate(const SemigroupSystem& s, const BernoulliWalk& walk,
                              const DeltaGrid& grid, std::uint64_t samples, std::uint64_t k_max,
                              std::uint64_t seed, unsigned workers) {
  std::vector<double> deltas = grid.values();
  RateAggregate agg;
  std::vector<RateEstimate> slots(samples);

  auto compute_one = [&](std::uint64_t i) {
    SymbolStream omega = SymbolStream::sampled(walk, seed, stream_salt::omega + i);
    double x = CounterRng(seed, stream_salt::point + i).uniform_at(0);
    RateEstimate est;
    std::vector<double> xs, ys;
    for (double d : deltas) {
      ReturnTime T = set_return_time(s, omega, ArcSet::of({ball({x}, d)}), k_max);
      if (T.censored) {
        ++est.dropped;
        continue;
      }
      est.grid.emplace_back(d, T.value);
      xs.push_back(-std::log(d));
      ys.push_back(static_cast<double>(T.value));
    }
    if (xs.size() >= 3) est.slope = linear_slope(xs, ys, &est.intercept, &est.r2);
    slots[i] = std::move(est);
  };

  if (workers <= 1 || samples < 2) {
    for (std::uint64_t i = 0; i < samples; ++i) compute_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (std::uint64_t i = next.fetch_add(1); i < samples; i = next.fetch_add(1))
          compute_one(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<double> slopes;
  for (std::uint64_t i = 0; i < samples; ++i) {
    RateEstimate& est = slots[i];
    if (est.grid.size() >= 3) {
      slopes.push_back(est.slope);
      if (est.dropped == 0) ++agg.fully_resolved;
    }
    agg.samples.push_back(std::move(est));
  }
  if (slopes.empty()) fail(Errc::estimate_undefined, "no resolvable rate samples");
  double sum = 0, sq = 0;
  for (double v : slopes) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(slopes.size());
  agg.mean_slope = sum / n;
  agg.stddev_slope = (slopes.size() > 1) ? std::sqrt(std::max(0.0, (sq - sum * sum / n) / (n - 1)))
                                         : 0.0;
  std::sort(slopes.begin(), slopes.end());
  agg.min_slope = slopes.front();
  agg.max_slope = slopes.back();
  auto quant = [&](double q) {
    double idx = q * (n - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, slopes.size() - 1);
    double t = idx - static_cast<double>(lo);
    return slopes[lo] * (1 - t) + slopes[hi] * t;
  };
  agg.q10 = quant(0.1);
  agg.q50 = quant(0.5);
  agg.q90 = quant(0.9);
  return agg;
}

RecurrenceReport verify_recurrence(const SemigroupSystem& s, const OmegaSpec& omega,
                                   const ArcSet& A, std::uint64_t M, std::uint64_t n_max,
                                   std::uint64_t seed, std::uint64_t shift_window,
                                   std::vector<ReturnSample>* samples_out) {
  if (A.total_length() <= 0.0) fail(Errc::estimate_undefined, "target set has zero length");

  BatchSymbols syms;
  const SymbolStream* fixed = nullptr;
  if (std::holds_alternative<BernoulliWalk>(omega)) {
    syms.mode = BatchSymbols::Mode::bernoulli;
    syms.walk = &std::get<BernoulliWalk>(omega);
    syms.seed = seed;
    syms.salt = stream_salt::omega;
  } else {
    syms.mode = BatchSymbols::Mode::fixed;
    fixed = &std::get<SymbolStream>(omega);
    syms.fixed = fixed;
  }

  RecurrenceReport rep;
  rep.samples = M;
  std::uint64_t returned = 0;

  if (s.all_linear()) {
    auto ranges = to_ranges(A);
    std::vector<std::uint64_t> starts(M);
    for (std::uint64_t i = 0; i < M; ++i) {
      RngCursor rng(seed, stream_salt::point + i);
      starts[i] = draw_in_ranges(rng, ranges);
    }
    BatchOut batch = modq_first_return(s, starts, syms, ranges, n_max);
    std::vector<std::uint64_t> failed;
    for (std::uint64_t i = 0; i < M; ++i) {
      if (!batch.censored[i]) {
        ++returned;
      } else {
        failed.push_back(i);
      }
      if (samples_out) {
        samples_out->push_back({i, static_cast<double>(starts[i]) / static_cast<double>(kQ),
                                batch.value[i], batch.censored[i] != 0});
      }
    }
    rep.fraction_returning = static_cast<double>(returned) / static_cast<double>(M);
    if (fixed != nullptr) {
      // Shifted-window variant: a return along sigma^{k-1}(omega) for some
      // k <= window also counts. Only the plain failures need rechecking.
      std::uint64_t windowed = returned;
      for (std::uint64_t idx : failed) {
        for (std::uint64_t k = 2; k <= shift_window; ++k) {
          SymbolStream sh = fixed->shifted(k - 1);
          std::vector<std::uint64_t> one = {starts[idx]};
          BatchSymbols s1{BatchSymbols::Mode::fixed, &sh, nullptr, 0, 0};
          BatchOut b1 = modq_first_return(s, one, s1, ranges, n_max);
          if (!b1.censored[0]) {
            ++windowed;
            break;
          }
        }
      }
      rep.fraction_shifted_window = static_cast<double>(windowed) / static_cast<double>(M);
    }
  } else {
    std::vector<double> starts(M);
    for (std::uint64_t i = 0; i < M; ++i) {
      RngCursor rng(seed, stream_salt::point + i);
      starts[i] = draw_in_set(rng, A);
    }
    BatchOut batch = float_first_return(s, starts, syms, A, n_max);
    for (std::uint64_t i = 0; i < M; ++i) {
      returned += batch.censored[i] ? 0 : 1;
      if (samples_out)
        samples_out->push_back({i, starts[i], batch.value[i], batch.censored[i] != 0});
    }
    rep.fraction_returning = static_cast<double>(returned) / static_cast<double>(M);
  }
  return rep;
}

RotationBoundReport rotation_ball_bound_check(const SemigroupSystem& rotations,
                                              const std::vector<double>& delta_grid,
                                              std::uint64_t x_samples, std::uint64_t seed) {
  if (!rotations.all_rotation())
    fail(Errc::unsupported_generator, "rotation bound check needs a rotation system");
  double alpha_max = 0.0;
  for (const GeneratorMap& g : rotations.generators) alpha_max = std::max(alpha_max, g.rot_alpha());

  RotationBoundReport rep;
  for (std::uint64_t i = 0; i < x_samples; ++i) {
    double x = CounterRng(seed, stream_salt::point + i).uniform_at(0);
    for (double d : delta_grid) {
      double bound = (1.0 / alpha_max + 1.0) / d;
      auto k_max = static_cast<std::uint64_t>(bound) + 2;
      ReturnTime T = action_ball_return_time(rotations, {x}, d, k_max);
      RotationBoundEntry e{x, d, T.value, bound};
      rep.entries.push_back(e);
      double margin = static_cast<double>(T.value) / bound;
      rep.worst_margin = std::max(rep.worst_margin, margin);
      if (T.censored || static_cast<double>(T.value) > bound) rep.all_hold = false;
    }
  }
  return rep;
}

}  // namespace sglab
