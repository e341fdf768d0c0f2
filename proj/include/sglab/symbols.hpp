#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sglab/maps.hpp"
#include "sglab/rng.hpp"

namespace sglab {

// Bernoulli law on symbols {1..p}: strictly positive weights summing to 1
// within 1e-12.
class BernoulliWalk {
public:
  explicit BernoulliWalk(std::vector<double> weights);
  static BernoulliWalk symmetric(std::size_t p);
  static BernoulliWalk parse(const std::string& spec);  // "0.5,0.5"

  std::size_t p() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double entropy() const;  // -sum a_i log a_i, natural log

  // Inverse-CDF sample from a uniform draw in [0,1).
  int sample(double u) const;

private:
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

// An element of Sigma_p^+ viewed through a cursor. Sampled streams are
// counter-based: the symbol at any index is computable in O(1), so shifting
// and cloning never touch shared state.
class SymbolStream {
public:
  enum class Mode { sampled, cyclic, explicit_tail };

  static SymbolStream sampled(const BernoulliWalk& walk, std::uint64_t seed,
                              std::uint64_t stream_id);
  static SymbolStream cyclic(const Word& pattern);
  static SymbolStream explicit_tail(std::vector<int> prefix, const Word& cycle);

  // Symbol at absolute index i >= 0 of this (possibly shifted) stream.
  int symbol_at(std::uint64_t i) const;

  // Cursor interface: emits symbol_at(position) and advances.
  int next();
  std::uint64_t position() const { return cursor_; }
  void rewind() { cursor_ = 0; }

  // Stream emitting symbols from index k onward; the cursor resets.
  SymbolStream shifted(std::uint64_t k) const;

  Mode mode() const { return mode_; }
  std::size_t alphabet() const;

private:
  SymbolStream() = default;
  Mode mode_ = Mode::cyclic;
  std::uint64_t offset_ = 0;
  std::uint64_t cursor_ = 0;
  // sampled
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  CounterRng rng_{0, 0};
  // cyclic / explicit
  std::vector<int> prefix_;
  std::vector<int> cycle_;
};

double bernoulli_entropy(const BernoulliWalk& walk);

}  // namespace sglab
