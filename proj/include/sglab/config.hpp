#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sglab/circle.hpp"
#include "sglab/hitting.hpp"
#include "sglab/maps.hpp"
#include "sglab/recurrence.hpp"
#include "sglab/symbols.hpp"

namespace sglab {

// A single JSON document drives every experiment; CLI flags override fields
// one-for-one before canonicalization, so the digest identifies the exact run.
class ExperimentConfig {
public:
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_json(nlohmann::json j);

  const nlohmann::json& raw() const { return raw_; }
  void override_field(const std::string& key, const nlohmann::json& value);

  std::string canonical() const { return raw_.dump(); }
  std::string digest() const;  // FNV-1a 64 of the canonical form, hex

  const std::string& experiment() const { return experiment_; }
  std::uint64_t seed() const;

  SemigroupSystem system() const;
  // walk spec: "bernoulli:...", "cyclic:...", "explicit:prefix|cycle"
  OmegaSpec omega() const;
  BernoulliWalk bernoulli_walk() const;  // errors unless the walk is a Bernoulli spec

  ArcSet target_set() const;  // "set": [[start, end], ...] half-open pairs
  DeltaGrid delta_grid() const;
  std::vector<std::uint64_t> n_grid(std::vector<std::uint64_t> fallback) const;
  std::vector<SupportAtom> support() const;

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> maybe_number(const std::string& key) const;
  double tolerance(double fallback) const { return number("tolerance", fallback); }

private:
  nlohmann::json raw_;
  std::string experiment_;
  void validate();
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "kac",     "cesaro-kac", "recurrence", "set-return",  "ball-return",    "rate",
      "dynball", "entropy",    "lyapunov",   "variational", "hitting",        "rotation-bound"};
  return names;
}

}  // namespace sglab
