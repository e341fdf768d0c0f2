#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sglab/circle.hpp"
#include "sglab/rational.hpp"

namespace sglab {

enum class MapKind { linear_expanding, logistic, rotation };

// One generator dynamics: x -> kx mod 1, x -> 4x(1-x), or x -> x+alpha mod 1.
struct GeneratorMap {
  MapKind kind = MapKind::linear_expanding;
  int degree = 2;                       // linear_expanding only, >= 2
  std::int64_t rot_num = 0, rot_den = 1;  // rotation only, 0 < rot_num/rot_den < 1
  int label = 0;                        // 1-based symbol index within its system

  static GeneratorMap linear(int k);
  static GeneratorMap logistic_map();
  static GeneratorMap rotation_map(std::int64_t num, std::int64_t den);

  double rot_alpha() const { return static_cast<double>(rot_num) / static_cast<double>(rot_den); }

  CirclePoint eval(CirclePoint x) const;
  RationalPoint eval_exact(const RationalPoint& x) const;

  // log|g'(x)|; throws singular_derivative for the logistic map at x = 1/2.
  double log_abs_derivative(CirclePoint x) const;

  // Exact forward image of an arc (union of monotone-piece images for the
  // logistic map).
  ArcSet arc_image(const Arc& a) const;

  std::string spec_string() const;
};

// Ordered generator list {g_1, ..., g_p}; the identity is the empty word.
struct SemigroupSystem {
  std::vector<GeneratorMap> generators;

  std::size_t p() const { return generators.size(); }
  const GeneratorMap& gen(int label) const;  // 1-based, validated
  bool all_linear() const;
  bool all_rotation() const;
  int max_degree() const;
  int min_degree() const;
  std::string spec_string() const;
};

// Finite word over {1..p}; the first symbol acts first.
struct Word {
  std::vector<int> symbols;

  static Word parse(const std::string& digits);  // "1212" -> (1,2,1,2)
  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  std::string str() const;
};

Word concat(const Word& first, const Word& then);

CirclePoint word_eval(const SemigroupSystem& s, const Word& w, CirclePoint x);
RationalPoint word_eval_exact(const SemigroupSystem& s, const Word& w, const RationalPoint& x);

ArcSet word_image(const SemigroupSystem& s, const Word& w, const ArcSet& set);

// All exact solutions of word_eval(w, x) = x. Linear words: the D-1 rationals
// m/(D-1) for total degree D. Pure logistic words: images of the conjugate
// doubling solutions under sin^2(pi y) (returned as floats through the
// conjugacy; see periodic_points_conjugate for the exact parameters).
std::vector<RationalPoint> periodic_points(const SemigroupSystem& s, const Word& w);

// Conjugate parameters y with h(y) periodic for a pure-logistic word, h(y) =
// sin^2(pi y); canonicalized to y <= 1/2 and deduplicated.
std::vector<RationalPoint> periodic_points_conjugate(std::size_t word_length);

// Config grammar: "linear:k", "logistic", "rotation:num/den" (case-insensitive).
GeneratorMap parse_generator(const std::string& spec);
SemigroupSystem parse_system(const std::string& spec);  // comma-separated

}  // namespace sglab
