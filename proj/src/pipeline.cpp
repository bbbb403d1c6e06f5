#include "decathlon/pipeline.hpp"

#include "decathlon/robustness.hpp"
#include "decathlon/shape.hpp"
#include "decathlon/structure.hpp"

#include <functional>

namespace decathlon {

namespace {

FeatureResult attempt(Feature f, const std::function<FeatureScore()>& body) {
  try {
    return {f, body(), {}};
  } catch (const std::exception& e) {
    return FeatureResult::absent(f, e.what());
  }
}

bool wants(const ScoreConfig& cfg, Feature f) { return cfg.features.count(f) > 0; }

}  // namespace

std::vector<AlgorithmReport> score_algorithms(const Dataset& x, const std::vector<ClustererSpec>& algorithms,
                                              const ScoreConfig& cfg) {
  if (algorithms.empty()) throw Error("no algorithm to score");
  if (cfg.features.empty()) throw Error("no feature enabled");

  std::optional<Clustering> truth;
  if (x.truth()) truth = Clustering::from_raw(*x.truth());

  std::vector<std::vector<FeatureResult>> results(algorithms.size());
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    const ClustererSpec& spec = algorithms[a];
    auto& out = results[a];

    if (wants(cfg, Feature::stability)) {
      StabilityConfig sc;
      sc.trials = cfg.stability_trials;
      sc.seed = cfg.seed;
      sc.threads = cfg.threads;
      out.push_back(attempt(Feature::stability, [&] { return stability(x, spec, sc, cfg.ledger); }));
    }
    if (wants(cfg, Feature::noise)) {
      if (!truth) {
        out.push_back(FeatureResult::absent(Feature::noise, "dataset has no ground-truth labels"));
      } else {
        NoiseConfig nc;
        nc.trials = cfg.noise_trials;
        nc.seed = cfg.seed;
        nc.threads = cfg.threads;
        out.push_back(attempt(Feature::noise, [&] { return noise_divergence(x, *truth, spec, nc, cfg.ledger); }));
      }
    }

    const bool structural = wants(cfg, Feature::homogeneity) || wants(cfg, Feature::distance) ||
                            wants(cfg, Feature::covolume) || wants(cfg, Feature::shape);
    if (!structural) continue;
    std::optional<Clustering> c;
    std::string failure;
    try {
      c = run(spec, x);
    } catch (const std::exception& e) {
      failure = std::string("clustering failed: ") + e.what();
    }
    auto structural_feature = [&](Feature f, const std::function<FeatureScore(const Clustering&)>& body) {
      if (!wants(cfg, f)) return;
      if (!c)
        out.push_back(FeatureResult::absent(f, failure));
      else
        out.push_back(attempt(f, [&] { return body(*c); }));
    };
    structural_feature(Feature::homogeneity, [&](const Clustering& k) { return homogeneity(x, k, cfg.core_k, cfg.ledger); });
    structural_feature(Feature::distance, [&](const Clustering& k) { return separation(x, k, cfg.ledger); });
    structural_feature(Feature::covolume, [&](const Clustering& k) { return covolume(x, k, cfg.ledger); });
    structural_feature(Feature::shape, [&](const Clustering& k) { return shape_score(x, k, cfg.threads, cfg.ledger); });
  }

  // Exclusive measurement phase: nothing else runs while timing.
  if (wants(cfg, Feature::complexity)) {
    const int blobs = truth && truth->num_clusters() > 0 ? truth->num_clusters() : 4;
    const SizedGenerator gen = blob_generator(cfg.seed, blobs, static_cast<int>(x.dim()));
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      results[a].push_back(attempt(Feature::complexity, [&] {
        return complexity_score(fit_exponent(time_clusterer(algorithms[a], gen, cfg.timing)), cfg.ledger);
      }));
    }
  }

  std::vector<AlgorithmReport> reports;
  for (std::size_t a = 0; a < algorithms.size(); ++a) reports.push_back(aggregate(algorithms[a].name, std::move(results[a])));
  return reports;
}

}  // namespace decathlon
