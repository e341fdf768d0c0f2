#include "sglab/symbols.hpp"

#include <cmath>
#include <sstream>

#include "sglab/error.hpp"

namespace sglab {

BernoulliWalk::BernoulliWalk(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) fail(Errc::config_error, "walk needs at least one weight");
  double sum = 0.0;
  for (double a : weights_) {
    if (!(a > 0.0)) fail(Errc::config_error, "walk weights must be positive");
    if (weights_.size() > 1 && (a < 1e-15 || a > 1.0 - 1e-15))
      fail(Errc::config_error, "walk weights must lie strictly inside (0,1)");
    sum += a;
  }
  if (std::fabs(sum - 1.0) > 1e-12) fail(Errc::config_error, "walk weights must sum to 1");
  cumulative_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    cumulative_[i] = acc;
  }
  cumulative_.back() = 1.0;
}

BernoulliWalk BernoulliWalk::symmetric(std::size_t p) {
  return BernoulliWalk(std::vector<double>(p, 1.0 / static_cast<double>(p)));
}

BernoulliWalk BernoulliWalk::parse(const std::string& spec) {
  std::vector<double> w;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      w.push_back(std::stod(item));
    } catch (...) {
      fail(Errc::config_error, "bad walk weight '" + item + "'");
    }
  }
  return BernoulliWalk(std::move(w));
}

double BernoulliWalk::entropy() const {
  double h = 0.0;
  for (double a : weights_) h -= a * std::log(a);
  return h;
}

int BernoulliWalk::sample(double u) const {
  for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
    if (u < cumulative_[i]) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(cumulative_.size());
}

double bernoulli_entropy(const BernoulliWalk& walk) { return walk.entropy(); }

SymbolStream SymbolStream::sampled(const BernoulliWalk& walk, std::uint64_t seed,
                                   std::uint64_t stream_id) {
  SymbolStream s;
  s.mode_ = Mode::sampled;
  s.weights_ = walk.weights();
  s.cumulative_.resize(s.weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.weights_.size(); ++i) {
    acc += s.weights_[i];
    s.cumulative_[i] = acc;
  }
  s.cumulative_.back() = 1.0;
  s.rng_ = CounterRng(seed, stream_id);
  return s;
}

SymbolStream SymbolStream::cyclic(const Word& pattern) {
  if (pattern.empty()) fail(Errc::config_error, "cyclic stream needs a nonempty word");
  SymbolStream s;
  s.mode_ = Mode::cyclic;
  s.cycle_ = pattern.symbols;
  return s;
}

SymbolStream SymbolStream::explicit_tail(std::vector<int> prefix, const Word& cycle) {
  if (cycle.empty()) fail(Errc::config_error, "explicit stream needs a nonempty cycle");
  SymbolStream s;
  s.mode_ = Mode::explicit_tail;
  s.prefix_ = std::move(prefix);
  s.cycle_ = cycle.symbols;
  return s;
}

int SymbolStream::symbol_at(std::uint64_t i) const {
  std::uint64_t k = offset_ + i;
  switch (mode_) {
    case Mode::sampled: {
      double u = rng_.uniform_at(k);
      for (std::size_t j = 0; j + 1 < cumulative_.size(); ++j) {
        if (u < cumulative_[j]) return static_cast<int>(j) + 1;
      }
      return static_cast<int>(cumulative_.size());
    }
    case Mode::cyclic:
      return cycle_[k % cycle_.size()];
    case Mode::explicit_tail:
      if (k < prefix_.size()) return prefix_[k];
      return cycle_[(k - prefix_.size()) % cycle_.size()];
  }
  fail(Errc::config_error, "bad stream mode");
}

int SymbolStream::next() { return symbol_at(cursor_++); }

SymbolStream SymbolStream::shifted(std::uint64_t k) const {
  SymbolStream s = *this;
  s.offset_ += k;
  s.cursor_ = 0;
  return s;
}

std::size_t SymbolStream::alphabet() const {
  switch (mode_) {
    case Mode::sampled:
      return weights_.size();
    case Mode::cyclic:
    case Mode::explicit_tail: {
      int m = 0;
      for (int s : prefix_) m = std::max(m, s);
      for (int s : cycle_) m = std::max(m, s);
      return static_cast<std::size_t>(m);
    }
  }
  return 0;
}

}  // namespace sglab
