#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sglab/config.hpp"
#include "sglab/error.hpp"
#include "sglab/runner.hpp"

using namespace sglab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json base_config(const std::string& experiment) {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["seed"] = 7;
  j["system"] = "linear:2,linear:3";
  j["walk"] = "bernoulli:0.5,0.5";
  return j;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config validation and digests") {
  nlohmann::json j = base_config("kac");
  j["set"] = {{0.0, 0.5}};
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.experiment() == "kac");
  CHECK(cfg.seed() == 7);
  CHECK(cfg.system().p() == 2);
  CHECK(cfg.target_set().total_length() == doctest::Approx(0.5));

  // digest is stable and sensitive
  std::string d1 = cfg.digest();
  CHECK(d1 == ExperimentConfig::from_json(j).digest());
  nlohmann::json j2 = j;
  j2["seed"] = 8;
  CHECK(d1 != ExperimentConfig::from_json(j2).digest());

  // key order does not matter: canonical dump sorts object keys
  nlohmann::json reordered;
  reordered["walk"] = j["walk"];
  reordered["system"] = j["system"];
  reordered["set"] = j["set"];
  reordered["seed"] = j["seed"];
  reordered["experiment"] = j["experiment"];
  CHECK(ExperimentConfig::from_json(reordered).digest() == d1);
}

TEST_CASE("config error paths") {
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::array()), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"experiment", "nope"}, {"seed", 1},
                                               {"system", "linear:2"}}),
                  Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"experiment", "kac"}, {"system", "linear:2"}}),
                  Error);  // missing seed
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"experiment", "kac"}, {"seed", 1},
                                               {"system", "linear:1"}}),
                  Error);  // bad degree
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/config.json"), Error);

  nlohmann::json j = base_config("kac");  // no 'set'
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  CHECK_THROWS_AS(cfg.target_set(), Error);
}

TEST_CASE("kac run writes deterministic outputs and verdicts") {
  nlohmann::json j = base_config("kac");
  j["set"] = {{0.0, 0.25}};
  j["samples"] = {{"M", 2000}, {"N_max", 1000}};
  ExperimentConfig cfg = ExperimentConfig::from_json(j);

  TempDir d1("sglab_run_a"), d2("sglab_run_b");
  RunOutcome o1 = run_experiment(cfg, d1.path.string(), 1);
  RunOutcome o2 = run_experiment(cfg, d2.path.string(), 1);
  CHECK(o1.all_pass());
  CHECK(o1.digest == o2.digest);
  CHECK(slurp(d1.path / "samples.jsonl") == slurp(d2.path / "samples.jsonl"));
  CHECK(slurp(d1.path / "aggregate.csv") == slurp(d2.path / "aggregate.csv"));
  CHECK(slurp(d1.path / "record.json") == slurp(d2.path / "record.json"));

  // JSONL carries one record per sample with the declared fields
  std::string jsonl = slurp(d1.path / "samples.jsonl");
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 2000);
  auto first = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
  CHECK(first["experiment"] == "kac");
  CHECK(first.contains("stream_id"));
  CHECK(first.contains("x"));
  CHECK(first.contains("censored"));

  // record declares the CSV column manifest
  auto record = nlohmann::json::parse(slurp(d1.path / "record.json"));
  CHECK(record["csv_columns"].is_array());
  CHECK(record["config_digest"] == o1.digest);
}

TEST_CASE("rate run is identical for any worker count") {
  nlohmann::json j = base_config("rate");
  j["samples"] = {{"M", 16}, {"K_max", 60}};
  j["delta_grid"] = {{"delta0", 0.1}, {"ratio", 0.5}, {"points", 8}};
  ExperimentConfig cfg = ExperimentConfig::from_json(j);

  TempDir d1("sglab_rate_w1"), d3("sglab_rate_w3");
  run_experiment(cfg, d1.path.string(), 1);
  run_experiment(cfg, d3.path.string(), 3);
  CHECK(slurp(d1.path / "samples.jsonl") == slurp(d3.path / "samples.jsonl"));
  CHECK(slurp(d1.path / "aggregate.csv") == slurp(d3.path / "aggregate.csv"));
}

TEST_CASE("experiment dispatch covers the remaining kinds") {
  TempDir dir("sglab_misc");

  nlohmann::json j = base_config("set-return");
  j["walk"] = "cyclic:1";
  j["system"] = "linear:2";
  j["set"] = {{0.3, 0.35}};
  RunOutcome o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.record["summary"]["T"] == 2);

  j = base_config("ball-return");
  j["x"] = 0.0;
  j["delta"] = 0.05;
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.record["summary"]["T"] == 1);

  j = base_config("variational");
  j["samples"] = {{"M_omega", 50}};
  j["n_grid"] = {4, 8, 12};
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.all_pass());

  j = base_config("lyapunov");
  j["samples"] = {{"n", 500}, {"M", 50}};
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.all_pass());

  j = base_config("entropy");
  j["samples"] = {{"M_omega", 100}};
  j["n_grid"] = {4, 8, 12};
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.all_pass());

  j = base_config("hitting");
  j["system"] = "logistic,linear:2";
  j["support"] = {{{"word", "1"}, {"weight", "1/3"}}, {{"word", "2"}, {"weight", "2/3"}}};
  j["samples"] = {{"hitting_n", 2}, {"window", 512}, {"M_omega", 4}, {"x_grid", 8}, {"L", 8}};
  j["ell"] = 0.32;
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.all_pass());
  CHECK(o.record["summary"]["alpha"] == 0.5);

  j = base_config("rotation-bound");
  j["system"] = "rotation:2/5";
  j["samples"] = {{"x_samples", 4}};
  j["delta_grid"] = {{"delta0", 0.2}, {"ratio", 0.5}, {"points", 4}};
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.all_pass());

  j = base_config("dynball");
  j["samples"] = {{"M", 6}, {"n", 60}};
  j["delta"] = 0.01;
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.record["summary"].contains("fraction_in_band"));

  j = base_config("recurrence");
  j["set"] = {{0.0, 0.1}};
  j["samples"] = {{"M", 3000}, {"N_max", 1000}};
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.all_pass());

  j = base_config("cesaro-kac");
  j["set"] = {{0.0, 0.5}};
  j["samples"] = {{"K", 10}, {"M", 500}, {"N_max", 500}};
  o = run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1);
  CHECK(o.all_pass());
}

TEST_CASE("experiment capability errors surface as config errors") {
  TempDir dir("sglab_cap");
  nlohmann::json j = base_config("entropy");
  j["system"] = "logistic,linear:2";  // entropy needs linear generators
  j["samples"] = {{"M_omega", 10}};
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1), Error);

  j = base_config("set-return");
  j["set"] = {{0.0, 0.5}};  // Bernoulli walk is not a fixed sequence
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(j), dir.path.string(), 1), Error);
}
