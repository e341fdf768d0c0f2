#include "sglab/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "sglab/error.hpp"
#include "sglab/kernels.hpp"
#include "sglab/rng.hpp"

namespace sglab {

namespace {

constexpr std::uint64_t kQ = 0xFFFFFFFFull;

// Least-squares intercept of y against 1/n over the last (up to) three grid
// points; the propagated half-width uses the per-point standard errors.
void extrapolate_in_inverse_n(const std::vector<std::pair<std::uint64_t, double>>& per_n,
                              const std::vector<double>& se, double* value, double* hw) {
  const std::size_t k = std::min<std::size_t>(3, per_n.size());
  const std::size_t off = per_n.size() - k;
  if (k == 1) {
    *value = per_n[off].second;
    *hw = 2.0 * se[off];
    return;
  }
  double su = 0, sy = 0;
  for (std::size_t i = off; i < per_n.size(); ++i) {
    su += 1.0 / static_cast<double>(per_n[i].first);
    sy += per_n[i].second;
  }
  double ub = su / static_cast<double>(k), yb = sy / static_cast<double>(k);
  double suu = 0, suy = 0;
  for (std::size_t i = off; i < per_n.size(); ++i) {
    double du = 1.0 / static_cast<double>(per_n[i].first) - ub;
    suu += du * du;
    suy += du * (per_n[i].second - yb);
  }
  double slope = (suu > 0) ? suy / suu : 0.0;
  *value = yb - slope * ub;
  double var = 0.0;
  for (std::size_t i = off; i < per_n.size(); ++i) {
    double du = 1.0 / static_cast<double>(per_n[i].first) - ub;
    double c = 1.0 / static_cast<double>(k) - (suu > 0 ? ub * du / suu : 0.0);
    var += c * c * se[i] * se[i];
  }
  *hw = 2.0 * std::sqrt(var);
}

std::uint64_t degree_product(const SemigroupSystem& s, const Word& prefix, std::uint64_t count) {
  std::uint64_t d = 1;
  for (std::uint64_t j = 0; j < count; ++j) {
    const GeneratorMap& g = s.gen(prefix.symbols.at(j));
    if (g.kind != MapKind::linear_expanding)
      fail(Errc::unsupported_generator, "partition refinement needs linear generators");
    d *= static_cast<std::uint64_t>(g.degree);
    if (d > (1ull << 40)) fail(Errc::search_budget, "refined partition too fine");
  }
  return d;
}

}  // namespace

CirclePartition CirclePartition::from_boundaries(std::vector<double> cuts) {
  for (double& c : cuts) c = circle_point(c).coord;
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::fabs(a - b) <= kGeomEps; }),
             cuts.end());
  CirclePartition p;
  p.cuts_ = std::move(cuts);
  return p;
}

CirclePartition CirclePartition::uniform(std::size_t cells) {
  if (cells == 0) fail(Errc::config_error, "partition needs at least one cell");
  std::vector<double> cuts(cells);
  for (std::size_t i = 0; i < cells; ++i)
    cuts[i] = static_cast<double>(i) / static_cast<double>(cells);
  return from_boundaries(std::move(cuts));
}

std::vector<Arc> CirclePartition::cells() const {
  if (cuts_.empty()) return {Arc{0.0, 1.0}};
  std::vector<Arc> out;
  out.reserve(cuts_.size());
  for (std::size_t i = 0; i + 1 < cuts_.size(); ++i)
    out.push_back(Arc{cuts_[i], cuts_[i + 1] - cuts_[i]});
  out.push_back(Arc{cuts_.back(), 1.0 - cuts_.back() + cuts_.front()});
  return out;
}

std::vector<double> CirclePartition::lengths() const {
  if (cuts_.empty()) return {1.0};
  std::vector<double> out;
  out.reserve(cuts_.size());
  for (std::size_t i = 0; i + 1 < cuts_.size(); ++i) out.push_back(cuts_[i + 1] - cuts_[i]);
  out.push_back(1.0 - cuts_.back() + cuts_.front());
  return out;
}

double CirclePartition::entropy() const {
  double h = 0.0;
  for (double len : lengths()) {
    if (len > kGeomEps) h -= len * std::log(len);
  }
  return h;
}

bool CirclePartition::is_uniform(double eps) const {
  std::vector<double> len = lengths();
  double expect = 1.0 / static_cast<double>(len.size());
  return std::all_of(len.begin(), len.end(),
                     [&](double l) { return std::fabs(l - expect) <= eps; });
}

CirclePartition refine_partition(const SemigroupSystem& s, const Word& prefix,
                                 const CirclePartition& beta, std::uint64_t n) {
  if (n == 0) fail(Errc::config_error, "refinement needs n >= 1");
  if (prefix.size() + 1 < n) fail(Errc::config_error, "word prefix shorter than n - 1");
  const std::vector<double>& base = beta.boundaries();
  if (base.empty()) fail(Errc::config_error, "refining the trivial partition");

  // level-j cuts are (b + m) / D_j over base cuts b, generated sorted and
  // merged pairwise
  std::vector<double> acc(base);
  std::uint64_t d = 1;
  std::vector<double> level, merged;
  for (std::uint64_t j = 1; j < n; ++j) {
    const GeneratorMap& g = s.gen(prefix.symbols[j - 1]);
    if (g.kind != MapKind::linear_expanding)
      fail(Errc::unsupported_generator, "partition refinement needs linear generators");
    d *= static_cast<std::uint64_t>(g.degree);
    if (d * base.size() > (1ull << 26)) fail(Errc::search_budget, "refined partition too fine");
    level.clear();
    level.reserve(base.size() * d);
    double dd = static_cast<double>(d);
    for (std::uint64_t m = 0; m < d; ++m) {
      double mm = static_cast<double>(m);
      for (double b : base) level.push_back((b + mm) / dd);
    }
    merged.clear();
    merged.resize(acc.size() + level.size());
    std::merge(acc.begin(), acc.end(), level.begin(), level.end(), merged.begin());
    acc.swap(merged);
  }
  return CirclePartition::from_boundaries(std::move(acc));
}

EntropyReport metric_entropy_estimate(const SemigroupSystem& s, const OmegaSpec& omega,
                                      const CirclePartition& beta,
                                      const std::vector<std::uint64_t>& n_grid,
                                      std::uint64_t M_omega, std::uint64_t seed) {
  if (n_grid.empty() || M_omega == 0) fail(Errc::config_error, "empty entropy grid");
  if (!s.all_linear())
    fail(Errc::unsupported_generator, "metric entropy estimation needs linear generators");
  const bool fixed = std::holds_alternative<SymbolStream>(omega);
  const bool uniform = beta.is_uniform();
  const double log_cells = std::log(static_cast<double>(beta.cell_count()));
  const std::uint64_t samples = fixed ? 1 : M_omega;

  EntropyReport rep;
  std::vector<double> se;
  for (std::uint64_t n : n_grid) {
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      Word prefix;
      if (fixed) {
        const SymbolStream& st = std::get<SymbolStream>(omega);
        for (std::uint64_t j = 0; j + 1 < n; ++j) prefix.symbols.push_back(st.symbol_at(j));
      } else {
        const BernoulliWalk& walk = std::get<BernoulliWalk>(omega);
        CounterRng rng(seed, stream_salt::omega + i);
        for (std::uint64_t j = 0; j + 1 < n; ++j)
          prefix.symbols.push_back(walk.sample(rng.uniform_at(j)));
      }
      double H;
      if (uniform) {
        // equal-cell join: H is exactly log(|beta| * prod degrees)
        H = log_cells + std::log(static_cast<double>(degree_product(s, prefix, n - 1)));
      } else {
        H = refine_partition(s, prefix, beta, n).entropy();
      }
      double v = H / static_cast<double>(n);
      sum += v;
      sq += v * v;
    }
    double mean = sum / static_cast<double>(samples);
    rep.per_n.emplace_back(n, mean);
    double var = samples > 1 ? (sq - sum * sum / static_cast<double>(samples)) /
                                   static_cast<double>(samples - 1)
                             : 0.0;
    se.push_back(std::sqrt(std::max(0.0, var) / static_cast<double>(samples)));
  }
  extrapolate_in_inverse_n(rep.per_n, se, &rep.extrapolated, &rep.half_width);
  return rep;
}

AnalyticEntropies analytic_entropies(const SemigroupSystem& s, const BernoulliWalk& walk) {
  if (!s.all_linear())
    fail(Errc::unsupported_generator, "analytic entropies need linear generators");
  if (walk.p() != s.p()) fail(Errc::config_error, "walk size does not match the system");
  AnalyticEntropies a;
  double sum_d = 0.0;
  for (const GeneratorMap& g : s.generators) sum_d += static_cast<double>(g.degree);
  a.h_top_skew = std::log(sum_d);
  a.h_top_action = std::log(sum_d / static_cast<double>(s.p()));
  for (std::size_t i = 0; i < s.p(); ++i)
    a.quenched_pressure +=
        walk.weights()[i] * std::log(static_cast<double>(s.generators[i].degree));
  a.walk_entropy = walk.entropy();
  return a;
}

VariationalReport variational_check(const SemigroupSystem& s, const BernoulliWalk& walk,
                                    const std::vector<std::uint64_t>& n_grid,
                                    std::uint64_t M_omega, std::uint64_t seed) {
  VariationalReport rep;
  rep.analytic = analytic_entropies(s, walk);
  rep.detail = metric_entropy_estimate(s, OmegaSpec(walk), CirclePartition::dyadic(), n_grid,
                                       M_omega, seed);
  rep.h_estimate = rep.detail.extrapolated;
  rep.coarse_bound = rep.analytic.h_top_action +
                     (std::log(static_cast<double>(s.p())) - rep.analytic.walk_entropy);
  rep.margin_coarse = rep.coarse_bound - rep.h_estimate;
  rep.margin_quenched = rep.analytic.quenched_pressure - rep.h_estimate;
  bool symmetric = true;
  for (double a : walk.weights())
    symmetric = symmetric && std::fabs(a - 1.0 / static_cast<double>(walk.p())) < 1e-12;
  if (symmetric)
    rep.margin_strict = rep.analytic.h_top_action - rep.analytic.quenched_pressure;
  return rep;
}

LyapunovEstimate lyapunov_estimate(const SemigroupSystem& s, const BernoulliWalk& walk,
                                   std::uint64_t n, std::uint64_t M, std::uint64_t seed) {
  if (n == 0 || M == 0) fail(Errc::config_error, "lyapunov estimate needs n, M >= 1");
  if (walk.p() != s.p()) fail(Errc::config_error, "walk size does not match the system");
  LyapunovEstimate est;
  est.orbits = M;

  bool has_logistic = false;
  for (const GeneratorMap& g : s.generators) has_logistic |= (g.kind == MapKind::logistic);
  if (!has_logistic) {
    double analytic = 0.0;
    for (std::size_t i = 0; i < s.p(); ++i) {
      const GeneratorMap& g = s.generators[i];
      analytic += walk.weights()[i] * (g.kind == MapKind::linear_expanding
                                           ? std::log(static_cast<double>(g.degree))
                                           : 0.0);
    }
    est.analytic = analytic;
  }

  double sum = 0.0, sq = 0.0;
  std::uint64_t used = 0;
  if (s.all_linear()) {
    const kernels::Ops& K = kernels::active();
    std::vector<double> logd(s.p() + 1, 0.0);
    std::vector<std::uint32_t> deg(s.p() + 1, 0);
    for (std::size_t i = 1; i <= s.p(); ++i) {
      deg[i] = static_cast<std::uint32_t>(s.gen(static_cast<int>(i)).degree);
      logd[i] = std::log(static_cast<double>(deg[i]));
    }
    std::vector<std::uint64_t> x(M);
    std::vector<double> acc(M, 0.0);
    std::vector<std::uint8_t> sym(M);
    for (std::uint64_t i = 0; i < M; ++i)
      x[i] = CounterRng(seed, stream_salt::point + i).below_at(0, kQ);
    for (std::uint64_t j = 0; j < n; ++j) {
      for (std::uint64_t i = 0; i < M; ++i) {
        double u = CounterRng(seed, stream_salt::omega + i).uniform_at(j);
        sym[i] = static_cast<std::uint8_t>(walk.sample(u));
      }
      K.accum_table(acc.data(), sym.data(), M, logd.data());
      K.step_modq_table(x.data(), sym.data(), M, deg.data(), kQ);
    }
    for (std::uint64_t i = 0; i < M; ++i) {
      double v = acc[i] / static_cast<double>(n);
      sum += v;
      sq += v * v;
      ++used;
    }
  } else {
    for (std::uint64_t i = 0; i < M; ++i) {
      CirclePoint x{CounterRng(seed, stream_salt::point + i).uniform_at(0)};
      double acc = 0.0;
      bool ok = true;
      for (std::uint64_t j = 0; j < n; ++j) {
        double u = CounterRng(seed, stream_salt::omega + i).uniform_at(j);
        const GeneratorMap& g = s.gen(walk.sample(u));
        try {
          acc += g.log_abs_derivative(x);
        } catch (const Error&) {
          ok = false;
          break;
        }
        x = g.eval(x);
      }
      if (!ok) {
        ++est.dropped;
        continue;
      }
      double v = acc / static_cast<double>(n);
      sum += v;
      sq += v * v;
      ++used;
    }
  }
  if (used == 0) fail(Errc::estimate_undefined, "all orbits dropped");
  est.mc_mean = sum / static_cast<double>(used);
  if (used > 1) {
    double var = (sq - sum * sum / static_cast<double>(used)) / static_cast<double>(used - 1);
    est.half_width = 2.0 * std::sqrt(std::max(0.0, var) / static_cast<double>(used));
  }
  return est;
}

AbramovRokhlinReport abramov_rokhlin_check(const SemigroupSystem& s, const BernoulliWalk& walk,
                                           const CirclePartition& beta,
                                           const std::vector<std::uint64_t>& n_grid,
                                           std::uint64_t M_omega, std::uint64_t seed) {
  if (!s.all_linear())
    fail(Errc::unsupported_generator, "product-partition check needs linear generators");
  if (walk.p() != s.p()) fail(Errc::config_error, "walk size does not match the system");
  const std::size_t p = s.p();
  const double hP = walk.entropy();

  AbramovRokhlinReport rep;
  std::vector<double> se;
  for (std::uint64_t n : n_grid) {
    // enumerate degree-count classes of the (n-1)-prefix with multinomial
    // weights; H depends only on the class
    double mean_H = 0.0;
    std::vector<std::uint64_t> counts(p, 0);
    double lg_n1 = std::lgamma(static_cast<double>(n));
    auto rec = [&](auto&& self, std::size_t gi, std::uint64_t left) -> void {
      if (gi + 1 == p) {
        counts[gi] = left;
        double logw = lg_n1;
        for (std::size_t t = 0; t < p; ++t) {
          logw -= std::lgamma(static_cast<double>(counts[t]) + 1.0);
          logw += static_cast<double>(counts[t]) * std::log(walk.weights()[t]);
        }
        Word rep_word;
        for (std::size_t t = 0; t < p; ++t)
          for (std::uint64_t c = 0; c < counts[t]; ++c)
            rep_word.symbols.push_back(static_cast<int>(t) + 1);
        double H;
        std::uint64_t cells = beta.cell_count() * degree_product(s, rep_word, n - 1);
        if (cells <= (1ull << 20)) {
          H = refine_partition(s, rep_word, beta, n).entropy();
        } else if (beta.is_uniform()) {
          H = std::log(static_cast<double>(cells));
        } else {
          fail(Errc::search_budget, "product partition too fine for a non-uniform base");
        }
        mean_H += std::exp(logw) * H;
        return;
      }
      for (std::uint64_t c = 0; c <= left; ++c) {
        counts[gi] = c;
        self(self, gi + 1, left - c);
      }
    };
    if (p == 1) {
      Word rep_word;
      for (std::uint64_t c = 0; c + 1 < n; ++c) rep_word.symbols.push_back(1);
      mean_H = refine_partition(s, rep_word, beta, n).entropy();
    } else {
      rec(rec, 0, n - 1);
    }
    rep.lhs_detail.per_n.emplace_back(n, hP + mean_H / static_cast<double>(n));
    se.push_back(0.0);  // exact enumeration, no sampling error
  }
  extrapolate_in_inverse_n(rep.lhs_detail.per_n, se, &rep.lhs_detail.extrapolated,
                           &rep.lhs_detail.half_width);
  rep.lhs = rep.lhs_detail.extrapolated;

  rep.fibred_detail = metric_entropy_estimate(s, OmegaSpec(walk), beta, n_grid, M_omega, seed);
  rep.rhs = hP + rep.fibred_detail.extrapolated;
  rep.diff = rep.lhs - rep.rhs;
  return rep;
}

}  // namespace sglab
