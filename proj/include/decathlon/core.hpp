#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decathlon {

/// Every failure surfaced by the library is a decathlon::Error carrying a
/// human-readable, single-line message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major point storage: one row per point.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kNoise = -1;

class Dataset {
 public:
  Dataset() = default;
  /// Validates shape and finiteness. Empty names are filled with x0, x1, ...
  Dataset(PointMatrix points, std::vector<std::string> feature_names = {},
          std::optional<std::vector<int>> truth = std::nullopt);

  const PointMatrix& points() const { return points_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  const std::optional<std::vector<int>>& truth() const { return truth_; }

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  auto point(Eigen::Index i) const { return points_.row(i); }

  /// Dataset restricted to the given feature columns, names carried along.
  Dataset select_features(std::span<const int> columns) const;
  /// Rows of this dataset followed by the rows of `extra`. Truth entries for
  /// the appended rows are kNoise (unknown).
  Dataset append(const PointMatrix& extra) const;

 private:
  PointMatrix points_;
  std::vector<std::string> names_;
  std::optional<std::vector<int>> truth_;
};

/// Hard partition of a point index set plus a noise sentinel.
class Clustering {
 public:
  Clustering() = default;
  /// Requires non-noise labels to already form 0..m-1.
  explicit Clustering(std::vector<int> labels);
  /// Accepts arbitrary integer labels (anything negative is noise) and
  /// renumbers the distinct non-noise labels in ascending order.
  static Clustering from_raw(std::span<const int> raw);

  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  std::size_t size() const { return labels_.size(); }
  int num_clusters() const { return m_; }
  std::size_t num_assigned() const;
  /// Point indices per cluster, in label order.
  std::vector<std::vector<int>> members() const;
  /// First n labels only.
  Clustering prefix(std::size_t n) const;

 private:
  std::vector<int> labels_;
  int m_ = 0;
};

using PMF = std::vector<double>;

/// Checks nonnegativity and unit sum (1e-12).
void validate_pmf(std::span<const double> p);

PMF cluster_pmf(const Clustering& c);

/// Maps every label of `b` to a label of `a`. Labels of `b` left unmatched
/// receive fresh labels a.num_clusters(), a.num_clusters()+1, ... in
/// ascending b-label order.
struct ClusterMatching {
  std::vector<int> b_to_a;
  long long overlap = 0;  // total overlap of the matched pairs
};

/// Maximum-overlap one-to-one matching (Hungarian method on the contingency
/// table). Among overlap-optimal matchings, the one with the smallest sum of
/// matched label indices (a + b) is chosen. Points that are noise in either
/// clustering do not contribute overlap. Only the first min(|a|,|b|) points
/// are compared.
ClusterMatching match_clusters(const Clustering& a, const Clustering& b);

/// Fraction of a's non-noise points whose b-label, after matching, differs
/// from their a-label. 0 when a has no assigned points.
double moved_fraction(const Clustering& a, const Clustering& b);

// ---------------------------------------------------------------------------
// Confidence intervals

enum class Statistic { z, t };

std::string_view to_string(Statistic s);

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t n_samples = 0;
  Statistic statistic = Statistic::z;
  double level = 0.95;
};

/// z uses multiplier 2 exactly; t uses the two-sided 95% Student-t quantile
/// with n-1 degrees of freedom. Sample standard deviation (n-1 denominator).
ConfidenceInterval confidence_interval(std::span<const double> samples, Statistic statistic);

/// Multiplier applied to s/sqrt(n) for the given statistic and sample count.
double ci_multiplier(Statistic statistic, std::size_t n);

// ---------------------------------------------------------------------------
// Ledger

enum class Feature { stability, noise, complexity, homogeneity, distance, covolume, shape };

inline constexpr std::array<Feature, 7> kAllFeatures = {
    Feature::stability, Feature::noise,    Feature::complexity, Feature::homogeneity,
    Feature::distance,  Feature::covolume, Feature::shape};

std::string_view to_string(Feature f);
/// Accepts the canonical names above; throws on anything else.
Feature parse_feature(std::string_view name);

/// Fully resolved scoring parameters for one feature.
struct LedgerEntry {
  Feature feature = Feature::stability;
  double alpha = 1.0;
  double beta = 0.0;
  double weight = 1.0;
};

/// alpha * |raw - beta|^weight
double scale_score(double raw, const LedgerEntry& entry);

/// Scoring parameters per feature. Several defaults depend on the data
/// (ln(d*C_X), G_max, D_max, max Shape(C_i), |C_X|); those are left empty
/// here and resolved by the scorer unless explicitly overridden.
class Ledger {
 public:
  struct Params {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> weight;
  };

  /// Table defaults: stability (100/sqrt2, 1/2, 1/2), noise (data, data,
  /// 1.25), complexity (50, 4, 2), homogeneity (data, data, 1.1), distance
  /// (data, 0, 1), covolume (100, 0, 2), shape (data, data, 2).
  static Ledger defaults();
  /// Overrides from a JSON document {feature: {alpha, beta, weight}}.
  static Ledger from_json_text(std::string_view text);
  static Ledger from_json_file(const std::string& path);

  const Params& params(Feature f) const { return params_.at(f); }
  void set(Feature f, const Params& p);
  /// Layers explicitly provided values of `overrides` onto this ledger.
  void merge(const Ledger& overrides);

  /// Uses stored values, falling back to the data-derived ones.
  LedgerEntry resolve(Feature f, std::optional<double> derived_alpha = std::nullopt,
                      std::optional<double> derived_beta = std::nullopt) const;

 private:
  std::map<Feature, Params> params_;
};

struct FeatureScore {
  Feature feature = Feature::stability;
  double raw = 0.0;
  std::optional<ConfidenceInterval> ci;
  LedgerEntry entry;
  double points = 0.0;
  /// Set when the feature computed but carries a caveat (e.g. fewer than
  /// two clusters for distance).
  std::optional<std::string> flag;
};

/// Builds a FeatureScore with points = scale_score(raw, entry).
FeatureScore make_score(Feature f, double raw, const LedgerEntry& entry,
                        std::optional<ConfidenceInterval> ci = std::nullopt);

}  // namespace decathlon
