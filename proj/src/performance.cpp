#include "decathlon/performance.hpp"

#include "decathlon/datagen.hpp"
#include "decathlon/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace decathlon {

SizedGenerator blob_generator(std::uint64_t seed, int blobs, int dim, double spread, double separation) {
  if (blobs < 1 || dim < 1) throw Error("blob_generator: need at least one blob and one dimension");
  return [=](int n) {
    if (n < blobs) throw Error("blob_generator: fewer points than blobs");
    BlobSpec spec = blob_template(blobs, n / blobs, dim, spread, separation,
                                  derive_seed(seed, Stream::complexity, static_cast<std::uint64_t>(n)));
    for (int i = 0; i < n % blobs; ++i) ++spec.counts[static_cast<std::size_t>(i)];
    return make_blobs(spec);
  };
}

namespace {

double measure(const ClustererSpec& a, const Dataset& x, Clock clock) {
  if (clock == Clock::work) {
    work::reset();
    (void)run(a, x);
    return static_cast<double>(work::count());
  }
  const auto start = std::chrono::steady_clock::now();
  (void)run(a, x);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TimingRun time_clusterer(const ClustererSpec& a, const SizedGenerator& gen, const TimingConfig& cfg) {
  if (cfg.sizes.size() < 4) throw Error("timing: at least 4 sizes required");
  if (!std::is_sorted(cfg.sizes.begin(), cfg.sizes.end()) ||
      std::adjacent_find(cfg.sizes.begin(), cfg.sizes.end()) != cfg.sizes.end())
    throw Error("timing: sizes must be strictly increasing");
  if (cfg.reps < 3) throw Error("timing: at least 3 reps required");

  TimingRun out{cfg.sizes, {}, cfg.reps, cfg.clock};
  for (int n : cfg.sizes) {
    const Dataset x = gen(n);
    (void)measure(a, x, cfg.clock);  // warm-up
    std::vector<double> samples;
    for (int r = 0; r < cfg.reps; ++r) samples.push_back(measure(a, x, cfg.clock));
    const double m = median(samples);
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw Error("timing: non-positive cost at N = " + std::to_string(n) +
                  (cfg.clock == Clock::work ? " (clusterer reports no work units)" : ""));
    }
    out.medians.push_back(m);
  }
  return out;
}

ExponentFit fit_exponent(const TimingRun& run) {
  const std::size_t n = run.sizes.size();
  if (n < 4 || run.medians.size() != n) throw Error("fit_exponent: at least 4 timing points required");
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(run.medians[i] > 0.0)) throw Error("fit_exponent: timings must be positive");
    const auto r = static_cast<Eigen::Index>(i);
    design(r, 0) = std::log(static_cast<double>(run.sizes[i]));
    design(r, 1) = 1.0;
    y(r) = std::log(run.medians[i]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - design * coef;
  const double ss_tot = (y.array() - y.mean()).square().sum();
  const double ss_res = resid.squaredNorm();
  ExponentFit fit{coef(0), coef(1), 1.0};
  if (ss_tot > 0.0) fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return fit;
}

FeatureScore complexity_score(const ExponentFit& fit, const Ledger& ledger) {
  const double raw = std::clamp(fit.exponent, 0.0, 4.0);
  return make_score(Feature::complexity, raw, ledger.resolve(Feature::complexity));
}

void write_timing_csv(std::ostream& out, const TimingRun& run) {
  out << "size," << (run.clock == Clock::work ? "median_work" : "median_seconds") << ",reps\n";
  char buf[64];
  for (std::size_t i = 0; i < run.sizes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", run.medians[i]);
    out << run.sizes[i] << ',' << buf << ',' << run.reps << '\n';
  }
}

}  // namespace decathlon
