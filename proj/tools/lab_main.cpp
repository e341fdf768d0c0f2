#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sglab/acceptance.hpp"
#include "sglab/config.hpp"
#include "sglab/error.hpp"
#include "sglab/rational.hpp"
#include "sglab/recurrence.hpp"
#include "sglab/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAcceptance = 3;

sglab::RationalPoint parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    return sglab::RationalPoint(sglab::BigInt(s), 1);
  }
  return sglab::RationalPoint(sglab::BigInt(s.substr(0, slash)),
                              sglab::BigInt(s.substr(slash + 1)));
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::string> out_dir, unsigned workers) {
  sglab::ExperimentConfig cfg = sglab::ExperimentConfig::from_file(config_path);
  if (seed) cfg.override_field("seed", *seed);
  std::string dir = out_dir.value_or(cfg.raw().value("out", std::string("results")));
  sglab::RunOutcome outcome = sglab::run_experiment(cfg, dir, workers);
  std::cout << "config digest " << outcome.digest << "\n";
  for (const auto& [name, ok] : outcome.verdicts)
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
  std::cout << "outputs written to " << dir << "\n";
  return outcome.all_pass() ? kExitOk : kExitAcceptance;
}

int cmd_oracle(const std::string& op, const std::string& system_spec, const std::string& word,
               const std::string& x, const std::string& set_spec, std::uint64_t n_max) {
  sglab::SemigroupSystem sys = sglab::parse_system(system_spec);
  if (op == "word_eval") {
    sglab::RationalPoint p = parse_rational(x);
    sglab::RationalPoint r = sglab::word_eval_exact(sys, sglab::Word::parse(word), p);
    std::cout << r.str() << "\n";
    return kExitOk;
  }
  if (op == "periodic_points") {
    for (const sglab::RationalPoint& p : sglab::periodic_points(sys, sglab::Word::parse(word)))
      std::cout << p.str() << "\n";
    return kExitOk;
  }
  if (op == "set_return_time") {
    nlohmann::json js = nlohmann::json::parse(set_spec);
    std::vector<sglab::Arc> arcs;
    for (const auto& pair : js) {
      double s = pair[0].get<double>(), e = pair[1].get<double>();
      if (e < s) e += 1.0;
      arcs.push_back(sglab::Arc{s, e - s});
    }
    sglab::ReturnTime t = sglab::set_return_time(
        sys, sglab::SymbolStream::cyclic(sglab::Word::parse(word)),
        sglab::ArcSet::from_arcs(std::move(arcs)), n_max);
    if (t.censored) {
      std::cout << "censored(" << t.value << ")\n";
    } else {
      std::cout << t.value << "\n";
    }
    return kExitOk;
  }
  throw sglab::Error(sglab::Errc::config_error, "unknown oracle op '" + op + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and estimation laboratory for semigroup actions on the circle"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run one configured experiment");
  std::string config_path;
  run->add_option("config", config_path, "JSON config file")->required();
  std::optional<std::uint64_t> seed;
  run->add_option("--seed", seed, "override the config seed");
  std::optional<std::string> out_dir;
  run->add_option("--out", out_dir, "output directory");
  unsigned workers = 1;
  run->add_option("--workers", workers, "worker threads (results are identical for any count)");

  // verify
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  bool quick = false;
  verify->add_flag("--quick", quick, "reduced-sample smoke variant");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact-rational spot checks");
  std::string op, system_spec = "linear:2", word = "1", x = "0/1", set_spec = "[[0.0,0.5]]";
  std::uint64_t n_max = 4096;
  oracle->add_option("op", op, "word_eval | periodic_points | set_return_time")->required();
  oracle->add_option("--system", system_spec, "generator list, e.g. linear:2,linear:3");
  oracle->add_option("--word", word, "symbol word, e.g. 1212");
  oracle->add_option("--x", x, "rational point num/den");
  oracle->add_option("--set", set_spec, "target set as JSON [[start,end],...]");
  oracle->add_option("--n-max", n_max, "search cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir, workers);
    if (verify->parsed()) {
      int failures = sglab::run_acceptance(quick, std::cout);
      return failures == 0 ? kExitOk : kExitAcceptance;
    }
    if (oracle->parsed()) return cmd_oracle(op, system_spec, word, x, set_spec, n_max);
  } catch (const sglab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == sglab::Errc::config_error ? kExitConfig : kExitAcceptance;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
