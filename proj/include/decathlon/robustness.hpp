#pragma once

#include "decathlon/clusterers.hpp"
#include "decathlon/core.hpp"

#include <cstdint>

namespace decathlon {

// ---------------------------------------------------------------------------
// Stability

struct StabilityConfig {
  /// Features clustered at a time; 0 selects max(2, ceil(d/5)).
  int subset_size = 0;
  /// Minimum trial count; extra batches of this size run until the CI
  /// half-width reaches the target or 10x this many trials have run.
  int trials = 30;
  double target_half_width = 0.02;
  std::uint64_t seed = 0;
  int threads = 1;
};

int resolve_subset_size(const StabilityConfig& cfg, Eigen::Index dim);

/// Cluster on a random feature subset, exchange one member for a
/// non-member, recluster, and return the moved fraction.
double stability_trial(const Dataset& x, const ClustererSpec& a, const StabilityConfig& cfg,
                       std::uint64_t trial_index);

/// raw = 1 - mean moved fraction, with a z (= 2) confidence interval.
FeatureScore stability(const Dataset& x, const ClustererSpec& a, const StabilityConfig& cfg,
                       const Ledger& ledger = Ledger::defaults());

// ---------------------------------------------------------------------------
// Noise sensitivity

/// -sum p_i ln p_i (natural log, 0 ln 0 = 0).
double entropy(const PMF& p);

/// sum p_i ln(p_i / q_i). Requires equal lengths and q_i > 0 wherever
/// p_i > 0. Evaluated as a sum of individually nonnegative terms
/// p ln(p/q) - p + q, so the result is never negative.
double kl_divergence(const PMF& p, const PMF& q);

struct NoiseConfig {
  /// Noise pool size; 0 selects (truth clusters) * d.
  int q = 0;
  /// Noise points added per trial; 0 selects ceil(q/2).
  int k = 0;
  int trials = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  /// All-noise reclusterings are resampled up to this many times per trial.
  int max_resamples = 20;
};

/// Resolved noise parameters for a given truth clustering.
struct NoisePlan {
  int q = 0;
  int k = 0;
  PointMatrix pool;  // q x d, uniform over the bounding box
};

NoisePlan plan_noise(const Dataset& x, const Clustering& truth, const NoiseConfig& cfg);

/// Reclustered PMF aligned to the truth labels. Entries 0..m-1 follow the
/// truth clusters, later entries are reclustered groups with no truth
/// counterpart. A pseudo-count of 1 per entry is added only when some truth
/// cluster would otherwise receive zero mass.
PMF aligned_noisy_pmf(const Clustering& truth, const Clustering& reclustered);

struct NoiseTrial {
  double divergence = 0.0;
  int resamples = 0;
};

/// One draw of k pool points, recluster x + draw, KL(p || p~).
NoiseTrial noise_trial(const Dataset& x, const Clustering& truth, const ClustererSpec& a, const NoiseConfig& cfg,
                       const NoisePlan& plan, std::uint64_t trial_index);

/// Mean divergence over cfg.trials draws with a Student-t interval; scored
/// with alpha = 100/ln(d C_X), beta = ln(d C_X) unless the ledger overrides.
FeatureScore noise_divergence(const Dataset& x, const Clustering& truth, const ClustererSpec& a,
                              const NoiseConfig& cfg, const Ledger& ledger = Ledger::defaults());

}  // namespace decathlon
