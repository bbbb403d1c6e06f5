#include "decathlon/robustness.hpp"

#include "decathlon/datagen.hpp"
#include "decathlon/parallel.hpp"
#include "decathlon/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace decathlon {

// ---------------------------------------------------------------------------
// Stability

int resolve_subset_size(const StabilityConfig& cfg, Eigen::Index dim) {
  if (cfg.subset_size > 0) return cfg.subset_size;
  return std::max(2, static_cast<int>((dim + 4) / 5));
}

double stability_trial(const Dataset& x, const ClustererSpec& a, const StabilityConfig& cfg,
                       std::uint64_t trial_index) {
  const int d = static_cast<int>(x.dim());
  const int m = resolve_subset_size(cfg, d);
  if (m < 2) throw Error("stability: subset size must be at least 2");
  if (d <= m) {
    throw Error("no feature to exchange (d = " + std::to_string(d) + ", subset size = " + std::to_string(m) + ")");
  }
  Rng rng = make_rng(cfg.seed, Stream::stability, trial_index);
  std::vector<int> features(static_cast<std::size_t>(d));
  std::iota(features.begin(), features.end(), 0);
  std::shuffle(features.begin(), features.end(), rng);

  std::vector<int> subset(features.begin(), features.begin() + m);
  std::uniform_int_distribution<int> pick_member(0, m - 1);
  std::uniform_int_distribution<int> pick_outsider(m, d - 1);
  const int slot = pick_member(rng);
  const int outsider = features[static_cast<std::size_t>(pick_outsider(rng))];
  std::vector<int> exchanged = subset;
  exchanged[static_cast<std::size_t>(slot)] = outsider;

  const Clustering before = run(a, x.select_features(subset));
  const Clustering after = run(a, x.select_features(exchanged));
  return moved_fraction(before, after);
}

FeatureScore stability(const Dataset& x, const ClustererSpec& a, const StabilityConfig& cfg, const Ledger& ledger) {
  if (cfg.trials < 2) throw Error("stability: at least 2 trials required");
  const std::size_t batch = static_cast<std::size_t>(cfg.trials);
  const std::size_t cap = 10 * batch;
  std::vector<double> moved;
  ConfidenceInterval ci;
  while (true) {
    const std::size_t base = moved.size();
    moved.resize(base + batch);
    parallel_for(batch, cfg.threads, [&](std::size_t i) { moved[base + i] = stability_trial(x, a, cfg, base + i); });
    ci = confidence_interval(moved, Statistic::z);
    if (ci.half_width <= cfg.target_half_width || moved.size() >= cap) break;
  }
  const double raw = std::clamp(1.0 - ci.mean, 0.0, 1.0);
  ConfidenceInterval stab_ci = ci;
  stab_ci.mean = raw;
  return make_score(Feature::stability, raw, ledger.resolve(Feature::stability), stab_ci);
}

// ---------------------------------------------------------------------------
// Information measures

double entropy(const PMF& p) {
  validate_pmf(p);
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

double kl_divergence(const PMF& p, const PMF& q) {
  if (p.size() != q.size()) throw Error("kl_divergence: supports are not aligned");
  validate_pmf(p);
  validate_pmf(q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      sum += q[i];
      continue;
    }
    if (q[i] == 0.0) throw Error("kl_divergence: q has zero mass where p is positive");
    sum += std::max(0.0, p[i] * std::log(p[i] / q[i]) - p[i] + q[i]);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Noise sensitivity

NoisePlan plan_noise(const Dataset& x, const Clustering& truth, const NoiseConfig& cfg) {
  if (truth.size() != static_cast<std::size_t>(x.size())) throw Error("noise: truth labels do not cover the dataset");
  if (truth.num_clusters() < 1) throw Error("noise: ground truth has no clusters");
  NoisePlan plan;
  plan.q = cfg.q > 0 ? cfg.q : truth.num_clusters() * static_cast<int>(x.dim());
  plan.k = cfg.k > 0 ? cfg.k : (plan.q + 1) / 2;
  if (plan.k < 1 || plan.k > plan.q) throw Error("noise: k must satisfy 1 <= k <= q");
  plan.pool = sample_noise(x, plan.q, derive_seed(cfg.seed, Stream::noise_batch)).points;
  return plan;
}

PMF aligned_noisy_pmf(const Clustering& truth, const Clustering& reclustered) {
  const ClusterMatching match = match_clusters(truth, reclustered);
  const int m = truth.num_clusters();
  int support = m;
  for (int target : match.b_to_a) support = std::max(support, target + 1);
  std::vector<double> counts(static_cast<std::size_t>(support), 0.0);
  double total = 0.0;
  for (int l : reclustered.labels()) {
    if (l < 0) continue;
    counts[static_cast<std::size_t>(match.b_to_a[static_cast<std::size_t>(l)])] += 1.0;
    total += 1.0;
  }
  if (total == 0.0) throw Error("empty partition");
  const bool smooth = std::any_of(counts.begin(), counts.begin() + m, [](double c) { return c == 0.0; });
  PMF out(counts.size());
  const double denom = smooth ? total + static_cast<double>(support) : total;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = (counts[i] + (smooth ? 1.0 : 0.0)) / denom;
  return out;
}

NoiseTrial noise_trial(const Dataset& x, const Clustering& truth, const ClustererSpec& a, const NoiseConfig& cfg,
                       const NoisePlan& plan, std::uint64_t trial_index) {
  PMF p = cluster_pmf(truth);
  std::vector<int> pool(static_cast<std::size_t>(plan.q));
  std::iota(pool.begin(), pool.end(), 0);
  const std::uint64_t trial_seed = derive_seed(cfg.seed, Stream::noise, trial_index);

  NoiseTrial result;
  for (int attempt = 0; attempt <= cfg.max_resamples; ++attempt) {
    Rng rng(derive_seed(trial_seed, Stream::noise, static_cast<std::uint64_t>(attempt)));
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> chosen(pool.begin(), pool.begin() + plan.k);
    std::sort(chosen.begin(), chosen.end());
    PointMatrix extra(plan.k, x.dim());
    for (int i = 0; i < plan.k; ++i) extra.row(i) = plan.pool.row(chosen[static_cast<std::size_t>(i)]);

    const Clustering reclustered = run(a, x.append(extra));
    if (reclustered.num_assigned() == 0) {
      ++result.resamples;
      continue;
    }
    const PMF noisy = aligned_noisy_pmf(truth, reclustered);
    p.resize(noisy.size(), 0.0);
    result.divergence = kl_divergence(p, noisy);
    return result;
  }
  throw Error("noise: reclustering was all noise in " + std::to_string(cfg.max_resamples + 1) +
              " consecutive draws");
}

FeatureScore noise_divergence(const Dataset& x, const Clustering& truth, const ClustererSpec& a,
                              const NoiseConfig& cfg, const Ledger& ledger) {
  if (cfg.trials < 2) throw Error("noise: at least 2 trials required");
  const NoisePlan plan = plan_noise(x, truth, cfg);
  std::vector<double> divergences(static_cast<std::size_t>(cfg.trials));
  parallel_for(divergences.size(), cfg.threads,
               [&](std::size_t i) { divergences[i] = noise_trial(x, truth, a, cfg, plan, i).divergence; });
  const ConfidenceInterval ci = confidence_interval(divergences, Statistic::t);

  const double reference = std::log(static_cast<double>(x.dim()) * truth.num_clusters());
  std::optional<double> alpha, beta;
  if (reference > 0.0) {
    alpha = 100.0 / reference;
    beta = reference;
  }
  const auto& params = ledger.params(Feature::noise);
  if ((!params.alpha && !alpha) || (!params.beta && !beta)) {
    throw Error("degenerate noise ledger: ln(d * C_X) <= 0; override noise alpha and beta in the ledger");
  }
  return make_score(Feature::noise, ci.mean, ledger.resolve(Feature::noise, alpha, beta), ci);
}

}  // namespace decathlon
