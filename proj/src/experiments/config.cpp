#include "sglab/config.hpp"

#include <algorithm>
#include <fstream>

#include "sglab/error.hpp"

namespace sglab {

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config_error, "cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::config_error, std::string("config parse error: ") + e.what());
  }
  return from_json(std::move(j));
}

ExperimentConfig ExperimentConfig::from_json(nlohmann::json j) {
  ExperimentConfig cfg;
  cfg.raw_ = std::move(j);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::override_field(const std::string& key, const nlohmann::json& value) {
  raw_[key] = value;
  validate();
}

void ExperimentConfig::validate() {
  if (!raw_.is_object()) fail(Errc::config_error, "config must be a JSON object");
  if (!raw_.contains("experiment") || !raw_["experiment"].is_string())
    fail(Errc::config_error, "config field 'experiment' (string) is required");
  experiment_ = raw_["experiment"].get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment_) == names.end())
    fail(Errc::config_error, "unknown experiment '" + experiment_ + "'");
  bool seed_ok = raw_.contains("seed") && raw_["seed"].is_number_integer() &&
                 (raw_["seed"].is_number_unsigned() || raw_["seed"].get<std::int64_t>() >= 0);
  if (!seed_ok)
    fail(Errc::config_error, "config field 'seed' (non-negative integer) is required");
  if (!raw_.contains("system") || !raw_["system"].is_string())
    fail(Errc::config_error, "config field 'system' (string) is required");
  parse_system(raw_["system"].get<std::string>());  // surfaces grammar errors early
}

std::string ExperimentConfig::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::uint64_t ExperimentConfig::seed() const { return raw_["seed"].get<std::uint64_t>(); }

SemigroupSystem ExperimentConfig::system() const {
  return parse_system(raw_["system"].get<std::string>());
}

OmegaSpec ExperimentConfig::omega() const {
  if (!raw_.contains("walk") || !raw_["walk"].is_string())
    fail(Errc::config_error, "config field 'walk' (string) is required for this experiment");
  std::string spec = raw_["walk"].get<std::string>();
  if (spec.rfind("bernoulli:", 0) == 0) {
    return OmegaSpec(BernoulliWalk::parse(spec.substr(10)));
  }
  if (spec.rfind("cyclic:", 0) == 0) {
    return OmegaSpec(SymbolStream::cyclic(Word::parse(spec.substr(7))));
  }
  if (spec.rfind("explicit:", 0) == 0) {
    std::string body = spec.substr(9);
    auto bar = body.find('|');
    if (bar == std::string::npos)
      fail(Errc::config_error, "explicit walk needs 'prefix|cycle' in '" + spec + "'");
    Word prefix = Word::parse(body.substr(0, bar));
    Word cycle = Word::parse(body.substr(bar + 1));
    return OmegaSpec(SymbolStream::explicit_tail(prefix.symbols, cycle));
  }
  fail(Errc::config_error, "unknown walk spec '" + spec + "'");
}

BernoulliWalk ExperimentConfig::bernoulli_walk() const {
  OmegaSpec o = omega();
  if (!std::holds_alternative<BernoulliWalk>(o))
    fail(Errc::config_error, "experiment '" + experiment_ + "' needs a Bernoulli walk");
  return std::get<BernoulliWalk>(o);
}

ArcSet ExperimentConfig::target_set() const {
  if (!raw_.contains("set")) fail(Errc::config_error, "config field 'set' is required");
  const nlohmann::json& js = raw_["set"];
  if (!js.is_array() || js.empty()) fail(Errc::config_error, "'set' must be a nonempty array");
  std::vector<Arc> arcs;
  for (const auto& pair : js) {
    if (!pair.is_array() || pair.size() != 2)
      fail(Errc::config_error, "'set' entries must be [start, end] pairs");
    double s = pair[0].get<double>();
    double e = pair[1].get<double>();
    if (e < s) e += 1.0;
    arcs.push_back(Arc{s, e - s});
  }
  ArcSet out = ArcSet::from_arcs(std::move(arcs));
  if (out.is_empty()) fail(Errc::config_error, "'set' is empty after normalization");
  return out;
}

DeltaGrid ExperimentConfig::delta_grid() const {
  DeltaGrid g;
  if (raw_.contains("delta_grid")) {
    const nlohmann::json& jg = raw_["delta_grid"];
    g.delta0 = jg.value("delta0", 0.1);
    g.ratio = jg.value("ratio", 0.5);
    g.points = jg.value("points", 12u);
  }
  if (!(g.delta0 > 0.0) || !(g.ratio > 0.0) || g.ratio >= 1.0 || g.points == 0)
    fail(Errc::config_error, "delta grid needs delta0 > 0, ratio in (0,1), points >= 1");
  return g;
}

std::vector<std::uint64_t> ExperimentConfig::n_grid(std::vector<std::uint64_t> fallback) const {
  if (!raw_.contains("n_grid")) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& v : raw_["n_grid"]) out.push_back(v.get<std::uint64_t>());
  if (out.empty()) fail(Errc::config_error, "'n_grid' must be nonempty");
  if (!std::is_sorted(out.begin(), out.end()))
    fail(Errc::config_error, "'n_grid' must be ascending");
  return out;
}

std::vector<SupportAtom> ExperimentConfig::support() const {
  std::vector<SupportAtom> out;
  if (!raw_.contains("support")) return out;
  for (const auto& entry : raw_["support"]) {
    SupportAtom atom;
    atom.word = Word::parse(entry.at("word").get<std::string>());
    std::string w = entry.at("weight").get<std::string>();
    auto slash = w.find('/');
    try {
      if (slash == std::string::npos) {
        atom.w_num = std::stoll(w);
        atom.w_den = 1;
      } else {
        atom.w_num = std::stoll(w.substr(0, slash));
        atom.w_den = std::stoll(w.substr(slash + 1));
      }
    } catch (...) {
      fail(Errc::config_error, "bad support weight '" + w + "'");
    }
    out.push_back(std::move(atom));
  }
  return out;
}

std::uint64_t ExperimentConfig::count(const std::string& key, std::uint64_t fallback) const {
  if (raw_.contains("samples") && raw_["samples"].contains(key)) {
    std::uint64_t v = raw_["samples"][key].get<std::uint64_t>();
    if (v == 0) fail(Errc::config_error, "sample size '" + key + "' must be positive");
    return v;
  }
  return fallback;
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
  if (raw_.contains(key)) return raw_[key].get<double>();
  return fallback;
}

std::optional<double> ExperimentConfig::maybe_number(const std::string& key) const {
  if (raw_.contains(key)) return raw_[key].get<double>();
  return std::nullopt;
}

}  // namespace sglab
