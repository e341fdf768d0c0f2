#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sglab/config.hpp"

namespace sglab {

struct RunOutcome {
  std::string digest;
  nlohmann::json record;  // summary, verdicts, column manifest
  std::vector<std::pair<std::string, bool>> verdicts;

  bool all_pass() const {
    for (const auto& [name, ok] : verdicts)
      if (!ok) return false;
    return true;
  }
};

// Runs one configured experiment and writes samples.jsonl, aggregate.csv and
// record.json under out_dir (atomically: nothing is left behind on error).
// Identical (config, seed) produce byte-identical outputs for any worker
// count.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                          unsigned workers);

}  // namespace sglab
