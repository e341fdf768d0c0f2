#include "sglab/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "sglab/error.hpp"
#include "sglab/rng.hpp"

namespace sglab {

namespace {

constexpr std::uint64_t kPointBudget = 1ull << 22;

// Exact closed membership of a rational point in a set of double-endpoint
// arcs, seam-aware (0 ~ 1).
bool contains_closed_exact(const ArcSet& set, const RationalPoint& p) {
  for (const Arc& a : set.arcs()) {
    if (a.length >= 1.0) return true;
    if (!rational_less(p, a.start) && rational_less_equal(p, a.start + a.length)) return true;
    if (p.num == 0 && a.start + a.length >= 1.0) return true;
  }
  return false;
}

// Preimage of an arc set under h(y) = sin^2(pi y): two mirror branches per
// arc. Endpoints are transcendental, so membership of the rational orbit
// parameters is decided in floating point with kGeomEps slack.
ArcSet conjugate_preimage(const ArcSet& A) {
  std::vector<Arc> arcs;
  for (const Arc& a : A.arcs()) {
    double s = std::clamp(a.start, 0.0, 1.0);
    double e = std::clamp(a.start + a.length, 0.0, 1.0);
    double lo = std::asin(std::sqrt(s)) / std::numbers::pi;
    double hi = std::asin(std::sqrt(e)) / std::numbers::pi;
    if (hi - lo <= 0.0) continue;
    arcs.push_back(Arc{lo, hi - lo});
    arcs.push_back(Arc{1.0 - hi, hi - lo});
  }
  return ArcSet::from_arcs(std::move(arcs));
}

RationalPoint canonical_conjugate(const RationalPoint& y) {
  RationalPoint mirror(y.den - y.num, y.den);
  return (mirror < y) ? mirror : y;
}

// a/b > c/d for non-negative 64-bit fractions
bool fraction_greater(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return static_cast<unsigned __int128>(a) * d > static_cast<unsigned __int128>(c) * b;
}

struct Fraction128 {
  unsigned __int128 num = 0;
  unsigned __int128 den = 1;

  void add(unsigned __int128 n, unsigned __int128 d) {
    num = num * d + n * den;
    den = den * d;
    unsigned __int128 a = num, b = den;
    while (b) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
  }
};

}  // namespace

HittingFrequency hitting_frequency(const SemigroupSystem& s, const SymbolStream& omega,
                                   CirclePoint x0, const ArcSet& A, std::uint64_t window,
                                   std::uint64_t trajectory_id) {
  if (window == 0) fail(Errc::config_error, "hitting frequency needs a positive window");
  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t m = window, t = 0; t < 3 && m >= 1; ++t, m /= 2) checkpoints.push_back(m);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  CirclePoint x = circle_point(x0.coord);
  std::uint64_t hits = 0;
  double best = 0.0;
  std::size_t ci = 0;
  for (std::uint64_t i = 0; i < window; ++i) {
    if (A.contains_closed(x)) ++hits;
    while (ci < checkpoints.size() && i + 1 == checkpoints[ci]) {
      best = std::max(best, static_cast<double>(hits) / static_cast<double>(checkpoints[ci]));
      ++ci;
    }
    x = s.gen(omega.symbol_at(i)).eval(x);
  }
  return HittingFrequency{best, window, trajectory_id};
}

ExactFrequency PeriodicOrbitMeasure::mass_in(const ArcSet& A) const {
  ExactFrequency f;
  f.period = atoms.size();
  if (conjugate) {
    ArcSet conj = conjugate_preimage(A);
    for (const RationalPoint& y : atoms)
      if (conj.contains_closed({y.to_double()})) ++f.hits;
  } else {
    for (const RationalPoint& x : atoms)
      if (contains_closed_exact(A, x)) ++f.hits;
  }
  return f;
}

std::vector<double> PeriodicOrbitMeasure::positions() const {
  std::vector<double> out;
  out.reserve(atoms.size());
  for (const RationalPoint& a : atoms) {
    double v = a.to_double();
    if (conjugate) v = std::pow(std::sin(std::numbers::pi * v), 2);
    out.push_back(v);
  }
  return out;
}

std::vector<PeriodicOrbitMeasure> periodic_orbit_candidates(const SemigroupSystem& s, int label,
                                                            std::uint64_t L) {
  if (L > 24) fail(Errc::search_budget, "periodic search budget is L <= 24");
  const GeneratorMap& g = s.gen(label);
  if (g.kind == MapKind::rotation)
    fail(Errc::no_finite_fix, "rotations carry no periodic-orbit measures");

  std::vector<PeriodicOrbitMeasure> out;
  std::uint64_t visited = 0;

  if (g.kind == MapKind::linear_expanding) {
    for (std::uint64_t m = 1; m <= L; ++m) {
      std::uint64_t dm = 1;
      bool overflow = false;
      for (std::uint64_t j = 0; j < m; ++j) {
        dm *= static_cast<std::uint64_t>(g.degree);
        if (dm > kPointBudget) overflow = true;
      }
      visited += dm;
      if (overflow || visited > kPointBudget) break;  // best-found lower bound
      BigInt q = BigInt(dm) - 1;
      for (BigInt num = 0; num < q; ++num) {
        RationalPoint x(num, q);
        std::vector<RationalPoint> orbit;
        RationalPoint cur = x;
        bool primitive = true;
        for (std::uint64_t j = 0; j < m; ++j) {
          orbit.push_back(cur);
          cur = g.eval_exact(cur);
          if (j + 1 < m && cur == x) {
            primitive = false;  // shorter period, already found at m' | m
            break;
          }
        }
        if (!primitive || !(cur == x)) continue;
        RationalPoint least = orbit[0];
        for (const RationalPoint& a : orbit)
          if (a < least) least = a;
        if (!(least == x)) continue;  // one canonical representative per orbit
        PeriodicOrbitMeasure meas;
        meas.word.symbols.assign(m, label);
        meas.base = x;
        meas.atoms = std::move(orbit);
        out.push_back(std::move(meas));
      }
    }
    return out;
  }

  // logistic: orbits through the conjugate doubling parameter; h identifies
  // y with 1-y, so the orbit period is the period of the canonical sequence
  std::set<std::pair<std::string, std::string>> seen;
  for (std::uint64_t m = 1; m <= L && m <= 22; ++m) {
    visited += (1ull << m);
    if (visited > kPointBudget) break;
    for (const RationalPoint& y : periodic_points_conjugate(m)) {
      std::vector<RationalPoint> seq;
      RationalPoint doubling = y;
      for (std::uint64_t j = 0; j < m; ++j) {
        seq.push_back(canonical_conjugate(doubling));
        doubling = RationalPoint(doubling.num * 2, doubling.den);
      }
      std::uint64_t period = m;
      for (std::uint64_t t = 1; t < m; ++t) {
        if (m % t != 0) continue;
        bool ok = true;
        for (std::uint64_t j = 0; ok && j < m; ++j) ok = seq[j] == seq[(j + t) % m];
        if (ok) {
          period = t;
          break;
        }
      }
      // the canonical period can be shorter than the doubling period (h glues
      // y with 1-y); keep the collapsed orbit and dedup across m
      seq.resize(period);
      RationalPoint least = seq[0];
      for (const RationalPoint& a : seq)
        if (a < least) least = a;
      auto key = std::make_pair(least.num.str(), least.den.str());
      if (!seen.insert(key).second) continue;
      PeriodicOrbitMeasure meas;
      meas.word.symbols.assign(period, label);
      meas.base = seq[0];
      meas.conjugate = true;
      meas.atoms = std::move(seq);
      out.push_back(std::move(meas));
    }
  }
  return out;
}

namespace {

// Best exact frequency among the periodic candidates of one pure generator.
ExactFrequency best_candidate(const SemigroupSystem& s, int label, const ArcSet& A,
                              std::uint64_t L, PeriodicOrbitMeasure* witness) {
  ExactFrequency best;
  bool first = true;
  for (PeriodicOrbitMeasure& cand : periodic_orbit_candidates(s, label, L)) {
    ExactFrequency f = cand.mass_in(A);
    if (first || fraction_greater(f.hits, f.period, best.hits, best.period)) {
      best = f;
      if (witness) *witness = std::move(cand);
      first = false;
    }
  }
  if (first) fail(Errc::estimate_undefined, "no periodic candidates found");
  return best;
}

// Mixed-word periodic candidates for all-linear systems, capped small.
void mixed_word_best(const SemigroupSystem& s, const ArcSet& A, std::uint64_t max_len,
                     std::uint64_t* best_num, std::uint64_t* best_den, Word* witness_word,
                     RationalPoint* witness_point) {
  for (std::uint64_t len = 2; len <= max_len; ++len) {
    std::uint64_t count = 1;
    for (std::uint64_t j = 0; j < len; ++j) count *= s.p();
    for (std::uint64_t code = 0; code < count; ++code) {
      Word w;
      std::uint64_t c = code;
      bool pure = true;
      for (std::uint64_t j = 0; j < len; ++j) {
        w.symbols.push_back(static_cast<int>(c % s.p()) + 1);
        c /= s.p();
        pure = pure && w.symbols.back() == w.symbols.front();
      }
      if (pure) continue;  // handled by the per-generator enumeration
      for (const RationalPoint& x : periodic_points(s, w)) {
        std::uint64_t hits = 0;
        RationalPoint cur = x;
        for (std::uint64_t j = 0; j < len; ++j) {
          if (contains_closed_exact(A, cur)) ++hits;
          cur = s.gen(w.symbols[j]).eval_exact(cur);
        }
        if (fraction_greater(hits, len, *best_num, *best_den)) {
          *best_num = hits;
          *best_den = len;
          *witness_word = w;
          *witness_point = x;
        }
      }
    }
  }
}

}  // namespace

GammaResult gamma_P_estimate(const SemigroupSystem& s, const HittingLaw& law, const ArcSet& A,
                             std::uint64_t M_omega, std::uint64_t x_grid, std::uint64_t window,
                             std::uint64_t L, std::uint64_t seed) {
  GammaResult res;
  if (A.is_empty()) return res;
  if (A.is_full()) {
    res.value = 1.0;
    res.exact = true;
    res.num = 1;
    res.den = 1;
    return res;
  }

  // exact periodic witnesses
  std::vector<int> labels;
  if (std::holds_alternative<std::vector<SupportAtom>>(law)) {
    for (const SupportAtom& atom : std::get<std::vector<SupportAtom>>(law))
      for (int sym : atom.word.symbols) labels.push_back(sym);
  } else {
    for (std::size_t i = 1; i <= s.p(); ++i) labels.push_back(static_cast<int>(i));
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::uint64_t best_num = 0, best_den = 1;
  for (int label : labels) {
    if (s.gen(label).kind == MapKind::rotation) continue;
    PeriodicOrbitMeasure w;
    ExactFrequency f = best_candidate(s, label, A, L, &w);
    if (fraction_greater(f.hits, f.period, best_num, best_den)) {
      best_num = f.hits;
      best_den = f.period;
      res.witness_word = w.word;
      res.witness_point = w.base;
      res.witness_conjugate = w.conjugate;
    }
  }
  if (std::holds_alternative<BernoulliWalk>(law) && s.all_linear()) {
    mixed_word_best(s, A, std::min<std::uint64_t>(L, 6), &best_num, &best_den,
                    &res.witness_word, &res.witness_point);
  }

  // sampled trajectories over the x-grid plus one random start per stream
  double float_best = 0.0;
  for (std::uint64_t i = 0; i < M_omega; ++i) {
    SymbolStream omega = [&]() {
      if (std::holds_alternative<BernoulliWalk>(law)) {
        return SymbolStream::sampled(std::get<BernoulliWalk>(law), seed, stream_salt::omega + i);
      }
      const auto& support = std::get<std::vector<SupportAtom>>(law);
      double u = CounterRng(seed, stream_salt::omega + i).uniform_at(0);
      double acc = 0.0;
      for (const SupportAtom& atom : support) {
        acc += static_cast<double>(atom.w_num) / static_cast<double>(atom.w_den);
        if (u < acc) return SymbolStream::cyclic(atom.word);
      }
      return SymbolStream::cyclic(support.back().word);
    }();
    for (std::uint64_t k = 0; k < x_grid; ++k) {
      double x = (2.0 * static_cast<double>(k) + 1.0) / (2.0 * static_cast<double>(x_grid));
      float_best = std::max(float_best, hitting_frequency(s, omega, {x}, A, window, i).value);
    }
    double xr = CounterRng(seed, stream_salt::point + i).uniform_at(0);
    float_best = std::max(float_best, hitting_frequency(s, omega, {xr}, A, window, i).value);
  }

  if (best_num > 0) {
    std::uint64_t g = std::gcd(best_num, best_den);
    best_num /= g;
    best_den /= g;
  }
  double exact_val =
      best_den > 0 ? static_cast<double>(best_num) / static_cast<double>(best_den) : 0.0;
  if (exact_val >= float_best) {
    res.value = exact_val;
    res.exact = true;
    res.num = best_num;
    res.den = best_den;
  } else {
    res.value = float_best;
    res.exact = false;
  }
  return res;
}

AlphaResult alpha_P_periodic(const SemigroupSystem& s, const std::vector<SupportAtom>& support,
                             const ArcSet& A, std::uint64_t L) {
  if (support.empty()) fail(Errc::config_error, "alpha needs a nonempty support");
  std::int64_t wsum_num = 0, wsum_den = 1;
  for (const SupportAtom& atom : support) {
    if (atom.w_num <= 0 || atom.w_den <= 0) fail(Errc::config_error, "weights must be positive");
    wsum_num = wsum_num * atom.w_den + atom.w_num * wsum_den;
    wsum_den *= atom.w_den;
  }
  if (wsum_num != wsum_den) fail(Errc::config_error, "support weights must sum to 1");

  AlphaResult res;
  Fraction128 acc;
  for (const SupportAtom& atom : support) {
    if (atom.word.empty()) fail(Errc::config_error, "empty support word");
    bool pure = std::all_of(atom.word.symbols.begin(), atom.word.symbols.end(),
                            [&](int sym) { return sym == atom.word.symbols[0]; });
    if (!pure)
      fail(Errc::unsupported_generator, "support atoms must be pure powers of one generator");
    PeriodicOrbitMeasure w;
    ExactFrequency f = best_candidate(s, atom.word.symbols[0], A, L, &w);
    res.witnesses.push_back(std::move(w));
    acc.add(static_cast<unsigned __int128>(atom.w_num) * f.hits,
            static_cast<unsigned __int128>(atom.w_den) * f.period);
  }
  res.num = static_cast<std::uint64_t>(acc.num);
  res.den = static_cast<std::uint64_t>(acc.den);
  res.value = static_cast<double>(res.num) / static_cast<double>(res.den);
  return res;
}

JenkinsonWindow jenkinson_window(std::uint64_t n) {
  if (n == 0) fail(Errc::config_error, "window index must be >= 1");
  JenkinsonWindow w;
  w.n = n;
  double two_n = std::pow(2.0, static_cast<double>(n));
  double two_n1 = std::pow(2.0, static_cast<double>(n - 1));
  w.logistic_range = {std::sin(std::numbers::pi / (2.0 * (two_n + 1.0))),
                      std::sin(std::numbers::pi / (2.0 * (two_n1 + 1.0)))};
  w.doubling_range = {1.0 / (two_n + 1.0), 1.0 / (two_n1 + 1.0)};
  double lo = std::max(w.logistic_range.first, w.doubling_range.first);
  double hi = std::min(w.logistic_range.second, w.doubling_range.second);
  if (lo < hi) w.intersection = std::make_pair(lo, hi);
  return w;
}

ArcSet jenkinson_arc(double ell) {
  if (!(ell > 0.0) || !(ell < 1.0)) fail(Errc::config_error, "interval width must be in (0,1)");
  return ArcSet::interval((1.0 - ell) / 2.0, (1.0 + ell) / 2.0);
}

HittingEqualityReport hitting_equality_check(const SemigroupSystem& s,
                                             const std::vector<SupportAtom>& support,
                                             std::uint64_t n, std::optional<double> ell_opt,
                                             std::uint64_t window, std::uint64_t M_omega,
                                             std::uint64_t x_grid, std::uint64_t L,
                                             std::uint64_t seed) {
  HittingEqualityReport rep;
  rep.n = n;
  rep.window = jenkinson_window(n);
  rep.expected = 1.0 / static_cast<double>(n);

  bool has_logistic = false, has_doubling = false;
  for (const GeneratorMap& g : s.generators) {
    if (g.kind == MapKind::logistic) {
      has_logistic = true;
    } else if (g.kind == MapKind::linear_expanding && g.degree == 2) {
      has_doubling = true;
    } else {
      fail(Errc::unsupported_generator,
           "hitting equality check supports the logistic and doubling maps");
    }
  }

  double lo = 0.0, hi = 1.0;
  if (has_logistic) {
    lo = std::max(lo, rep.window.logistic_range.first);
    hi = std::min(hi, rep.window.logistic_range.second);
  }
  if (has_doubling) {
    lo = std::max(lo, rep.window.doubling_range.first);
    hi = std::min(hi, rep.window.doubling_range.second);
  }
  if (!(lo < hi)) {
    rep.window_ok = false;  // empty window intersection: skipped with notice
    rep.ell = ell_opt.value_or(0.0);
    return rep;
  }
  rep.ell = ell_opt.value_or(0.5 * (lo + hi));
  rep.window_ok = rep.ell >= lo - kGeomEps && rep.ell < hi + kGeomEps;
  if (!rep.window_ok) return rep;

  ArcSet A = jenkinson_arc(rep.ell);
  rep.alpha = alpha_P_periodic(s, support, A, L);
  rep.gamma = gamma_P_estimate(s, HittingLaw(support), A, M_omega, x_grid, window, L, seed);

  for (std::size_t i = 0; i < rep.alpha.witnesses.size(); ++i) {
    const PeriodicOrbitMeasure& w = rep.alpha.witnesses[i];
    double weight = static_cast<double>(support[i].w_num) /
                    (static_cast<double>(support[i].w_den) * static_cast<double>(w.period()));
    for (double pos : w.positions()) rep.marginal_atoms.emplace_back(pos, weight);
  }
  return rep;
}

}  // namespace sglab
