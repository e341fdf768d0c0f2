#include "sglab/maps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sglab/error.hpp"

namespace sglab {

GeneratorMap GeneratorMap::linear(int k) {
  if (k < 2) fail(Errc::unknown_generator, "linear generator needs degree >= 2");
  GeneratorMap g;
  g.kind = MapKind::linear_expanding;
  g.degree = k;
  return g;
}

GeneratorMap GeneratorMap::logistic_map() {
  GeneratorMap g;
  g.kind = MapKind::logistic;
  return g;
}

GeneratorMap GeneratorMap::rotation_map(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num <= 0 || num >= den)
    fail(Errc::unknown_generator, "rotation number must be in (0,1)");
  std::int64_t g = std::gcd(num, den);
  GeneratorMap m;
  m.kind = MapKind::rotation;
  m.rot_num = num / g;
  m.rot_den = den / g;
  return m;
}

CirclePoint GeneratorMap::eval(CirclePoint x) const {
  switch (kind) {
    case MapKind::linear_expanding: {
      double y = x.coord * static_cast<double>(degree);
      return circle_point(y);
    }
    case MapKind::logistic: {
      double y = (4.0 * x.coord) * (1.0 - x.coord);
      return circle_point(y);
    }
    case MapKind::rotation:
      return circle_point(x.coord + rot_alpha());
  }
  fail(Errc::unknown_generator, "bad map kind");
}

RationalPoint GeneratorMap::eval_exact(const RationalPoint& x) const {
  switch (kind) {
    case MapKind::linear_expanding:
      return RationalPoint(x.num * degree, x.den);
    case MapKind::logistic: {
      // 4 n (d - n) / d^2
      return RationalPoint(4 * x.num * (x.den - x.num), x.den * x.den);
    }
    case MapKind::rotation:
      return RationalPoint(x.num * rot_den + BigInt(rot_num) * x.den, x.den * rot_den);
  }
  fail(Errc::unknown_generator, "bad map kind");
}

double GeneratorMap::log_abs_derivative(CirclePoint x) const {
  switch (kind) {
    case MapKind::linear_expanding:
      return std::log(static_cast<double>(degree));
    case MapKind::logistic: {
      double d = 4.0 - 8.0 * x.coord;
      if (d == 0.0) fail(Errc::singular_derivative, "logistic derivative vanishes at 1/2");
      return std::log(std::fabs(d));
    }
    case MapKind::rotation:
      return 0.0;
  }
  fail(Errc::unknown_generator, "bad map kind");
}

ArcSet GeneratorMap::arc_image(const Arc& a) const {
  if (a.length <= 0.0) return ArcSet::empty_set();
  if (a.length >= 1.0) {
    if (kind == MapKind::rotation) return ArcSet::full_circle();
    return ArcSet::full_circle();  // both expanding families are onto
  }
  switch (kind) {
    case MapKind::linear_expanding: {
      double len = a.length * static_cast<double>(degree);
      if (len >= 1.0) return ArcSet::full_circle();
      double s = circle_point(a.start * static_cast<double>(degree)).coord;
      return ArcSet::of({Arc{s, len}});
    }
    case MapKind::rotation:
      return ArcSet::of({Arc{circle_point(a.start + rot_alpha()).coord, a.length}});
    case MapKind::logistic: {
      // Split at the critical point 1/2; each monotone piece maps to the
      // interval spanned by its endpoint images.
      auto f = [](double x) { return (4.0 * x) * (1.0 - x); };
      double lo = a.start;
      double hi = a.start + a.length;  // may exceed 1: treat on [0,1] with wrap split
      std::vector<std::pair<double, double>> pieces;
      if (hi <= 1.0) {
        pieces.emplace_back(lo, hi);
      } else {
        pieces.emplace_back(lo, 1.0);
        pieces.emplace_back(0.0, hi - 1.0);
      }
      std::vector<Arc> images;
      for (auto [s, e] : pieces) {
        std::vector<std::pair<double, double>> mono;
        if (s < 0.5 && e > 0.5) {
          mono.emplace_back(s, 0.5);
          mono.emplace_back(0.5, e);
        } else {
          mono.emplace_back(s, e);
        }
        for (auto [ms, me] : mono) {
          double fa = f(ms), fb = f(me);
          double ilo = std::min(fa, fb), ihi = std::max(fa, fb);
          ihi = std::min(ihi, 1.0);
          if (ihi >= 1.0) ihi = 1.0;
          if (ihi - ilo > 0.0) images.push_back(Arc{ilo, ihi - ilo});
          if (ihi == 1.0) images.push_back(Arc{0.0, 0.0});  // 1 ~ 0 identification, zero measure
        }
      }
      return ArcSet::from_arcs(std::move(images));
    }
  }
  fail(Errc::unknown_generator, "bad map kind");
}

std::string GeneratorMap::spec_string() const {
  switch (kind) {
    case MapKind::linear_expanding:
      return "linear:" + std::to_string(degree);
    case MapKind::logistic:
      return "logistic";
    case MapKind::rotation:
      return "rotation:" + std::to_string(rot_num) + "/" + std::to_string(rot_den);
  }
  return "?";
}

const GeneratorMap& SemigroupSystem::gen(int label) const {
  if (label < 1 || static_cast<std::size_t>(label) > generators.size())
    fail(Errc::unknown_generator, "symbol " + std::to_string(label) + " out of range");
  return generators[static_cast<std::size_t>(label - 1)];
}

bool SemigroupSystem::all_linear() const {
  return std::all_of(generators.begin(), generators.end(),
                     [](const GeneratorMap& g) { return g.kind == MapKind::linear_expanding; });
}

bool SemigroupSystem::all_rotation() const {
  return std::all_of(generators.begin(), generators.end(),
                     [](const GeneratorMap& g) { return g.kind == MapKind::rotation; });
}

int SemigroupSystem::max_degree() const {
  int m = 0;
  for (const GeneratorMap& g : generators)
    if (g.kind == MapKind::linear_expanding) m = std::max(m, g.degree);
  return m;
}

int SemigroupSystem::min_degree() const {
  int m = 0;
  for (const GeneratorMap& g : generators)
    if (g.kind == MapKind::linear_expanding) m = (m == 0) ? g.degree : std::min(m, g.degree);
  return m;
}

std::string SemigroupSystem::spec_string() const {
  std::string out;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i) out += ",";
    out += generators[i].spec_string();
  }
  return out;
}

Word Word::parse(const std::string& digits) {
  Word w;
  w.symbols.reserve(digits.size());
  for (char c : digits) {
    if (c < '1' || c > '9') fail(Errc::config_error, "word symbols must be digits 1-9");
    w.symbols.push_back(c - '0');
  }
  return w;
}

std::string Word::str() const {
  std::string out;
  for (int s : symbols) out += static_cast<char>('0' + s);
  return out;
}

Word concat(const Word& first, const Word& then) {
  Word w = first;
  w.symbols.insert(w.symbols.end(), then.symbols.begin(), then.symbols.end());
  return w;
}

CirclePoint word_eval(const SemigroupSystem& s, const Word& w, CirclePoint x) {
  for (int sym : w.symbols) x = s.gen(sym).eval(x);
  return x;
}

RationalPoint word_eval_exact(const SemigroupSystem& s, const Word& w, const RationalPoint& x) {
  RationalPoint p = x;
  for (int sym : w.symbols) p = s.gen(sym).eval_exact(p);
  return p;
}

ArcSet word_image(const SemigroupSystem& s, const Word& w, const ArcSet& set) {
  ArcSet cur = set;
  for (int sym : w.symbols) {
    const GeneratorMap& g = s.gen(sym);
    ArcSet next;
    for (const Arc& a : cur.arcs()) next = next.unite(g.arc_image(a));
    cur = std::move(next);
  }
  return cur;
}

std::vector<RationalPoint> periodic_points(const SemigroupSystem& s, const Word& w) {
  if (w.empty()) fail(Errc::config_error, "periodic_points: empty word");
  bool linear = true, logistic = true;
  for (int sym : w.symbols) {
    MapKind k = s.gen(sym).kind;
    if (k == MapKind::rotation)
      fail(Errc::no_finite_fix, "rotation words have no finite fixed-point set");
    linear = linear && (k == MapKind::linear_expanding);
    logistic = logistic && (k == MapKind::logistic);
  }
  std::vector<RationalPoint> out;
  if (linear) {
    BigInt d = 1;
    for (int sym : w.symbols) d *= s.gen(sym).degree;
    BigInt q = d - 1;
    for (BigInt m = 0; m < q; ++m) out.emplace_back(m, q);
    return out;
  }
  if (logistic) {
    // The solutions are sin^2(pi y) over the conjugate doubling solutions y;
    // they are irrational, so the exact entry point hands out the parameters.
    fail(Errc::unsupported_generator,
         "logistic periodic points are irrational; use periodic_points_conjugate");
  }
  fail(Errc::unsupported_generator, "mixed logistic/linear words have no exact solver");
}

std::vector<RationalPoint> periodic_points_conjugate(std::size_t word_length) {
  if (word_length == 0) fail(Errc::config_error, "empty word");
  if (word_length > 62) fail(Errc::search_budget, "conjugate search limited to length 62");
  std::uint64_t q = (1ull << word_length) - 1ull;
  std::vector<RationalPoint> out;
  std::vector<bool> seen(q, false);
  for (std::uint64_t m = 0; m < q; ++m) {
    // Canonical representative of {m, q - m} (h identifies y with 1-y).
    std::uint64_t canon = std::min(m, q - m);
    if (seen[canon]) continue;
    seen[canon] = true;
    out.emplace_back(BigInt(canon), BigInt(q));
  }
  return out;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

GeneratorMap parse_generator(const std::string& spec) {
  std::string s = lower(spec);
  if (s == "logistic") return GeneratorMap::logistic_map();
  if (s.rfind("linear:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(s.substr(7));
    } catch (...) {
      fail(Errc::config_error, "bad linear degree in '" + spec + "'");
    }
    return GeneratorMap::linear(k);
  }
  if (s.rfind("rotation:", 0) == 0) {
    std::string frac = s.substr(9);
    auto slash = frac.find('/');
    if (slash == std::string::npos)
      fail(Errc::config_error, "rotation needs rational num/den in '" + spec + "'");
    try {
      std::int64_t num = std::stoll(frac.substr(0, slash));
      std::int64_t den = std::stoll(frac.substr(slash + 1));
      return GeneratorMap::rotation_map(num, den);
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::config_error, "bad rotation number in '" + spec + "'");
    }
  }
  fail(Errc::config_error, "unknown generator spec '" + spec + "'");
}

SemigroupSystem parse_system(const std::string& spec) {
  SemigroupSystem sys;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    GeneratorMap g = parse_generator(item);
    g.label = static_cast<int>(sys.generators.size()) + 1;
    sys.generators.push_back(g);
  }
  if (sys.generators.empty()) fail(Errc::config_error, "empty system spec");
  return sys;
}

}  // namespace sglab
