#pragma once

#include "decathlon/clusterers.hpp"
#include "decathlon/performance.hpp"
#include "decathlon/scoring.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace decathlon {

struct ScoreConfig {
  std::set<Feature> features{kAllFeatures.begin(), kAllFeatures.end()};
  Ledger ledger = Ledger::defaults();
  std::uint64_t seed = 0;
  int stability_trials = 30;
  int noise_trials = 100;
  int core_k = 5;
  int threads = 1;
  TimingConfig timing;
};

/// Scores every algorithm on x. Features that cannot be computed are
/// reported absent with the reason. Complexity timing runs after all other
/// scoring, one algorithm at a time.
std::vector<AlgorithmReport> score_algorithms(const Dataset& x, const std::vector<ClustererSpec>& algorithms,
                                              const ScoreConfig& cfg);

}  // namespace decathlon
