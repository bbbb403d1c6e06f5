#pragma once

#include "decathlon/clusterers.hpp"
#include "decathlon/core.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace decathlon {

/// Source of a size-N dataset for a timing run.
using SizedGenerator = std::function<Dataset(int n)>;

/// Four 2D Gaussian blobs (unit spread, 10 apart) sized to n points, drawn
/// from the complexity stream of `seed`.
SizedGenerator blob_generator(std::uint64_t seed, int blobs = 4, int dim = 2, double spread = 1.0,
                              double separation = 10.0);

enum class Clock {
  wall,  // seconds of steady_clock time
  work,  // elementary work units reported by the clusterer; reproducible
};

struct TimingConfig {
  std::vector<int> sizes = {1000, 2000, 4000, 8000, 16000};
  int reps = 3;
  Clock clock = Clock::wall;
};

struct TimingRun {
  std::vector<int> sizes;
  std::vector<double> medians;
  int reps = 0;
  Clock clock = Clock::wall;
};

/// Median cost per size over cfg.reps runs after one discarded warm-up.
/// Must not overlap with other scoring work.
TimingRun time_clusterer(const ClustererSpec& a, const SizedGenerator& gen, const TimingConfig& cfg = {});

struct ExponentFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Least-squares line through (ln N, ln T).
ExponentFit fit_exponent(const TimingRun& run);

/// raw = exponent clamped to [0, 4], scored against the complexity entry.
FeatureScore complexity_score(const ExponentFit& fit, const Ledger& ledger = Ledger::defaults());

/// size,median,reps rows with a header. The median column is named
/// median_seconds or median_work after the clock.
void write_timing_csv(std::ostream& out, const TimingRun& run);

}  // namespace decathlon
