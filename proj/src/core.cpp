#include "decathlon/core.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace decathlon {

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(PointMatrix points, std::vector<std::string> feature_names,
                 std::optional<std::vector<int>> truth)
    : points_(std::move(points)), names_(std::move(feature_names)), truth_(std::move(truth)) {
  if (points_.rows() < 1) throw Error("dataset must contain at least one point");
  if (points_.cols() < 1) throw Error("dataset must have at least one feature");
  if (!points_.allFinite()) throw Error("dataset contains non-finite coordinates");
  if (names_.empty()) {
    for (Eigen::Index j = 0; j < points_.cols(); ++j) names_.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names_.size()) != points_.cols()) {
    throw Error("feature name count " + std::to_string(names_.size()) + " does not match dimension " +
                std::to_string(points_.cols()));
  }
  if (truth_ && static_cast<Eigen::Index>(truth_->size()) != points_.rows()) {
    throw Error("truth label count does not match point count");
  }
}

Dataset Dataset::select_features(std::span<const int> columns) const {
  if (columns.empty()) throw Error("feature selection is empty");
  PointMatrix sub(points_.rows(), static_cast<Eigen::Index>(columns.size()));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const int c = columns[j];
    if (c < 0 || c >= points_.cols()) throw Error("feature index out of range");
    sub.col(static_cast<Eigen::Index>(j)) = points_.col(c);
    names.push_back(names_[static_cast<std::size_t>(c)]);
  }
  return Dataset(std::move(sub), std::move(names), truth_);
}

Dataset Dataset::append(const PointMatrix& extra) const {
  if (extra.rows() == 0) return *this;
  if (extra.cols() != points_.cols()) throw Error("appended points have wrong dimension");
  PointMatrix all(points_.rows() + extra.rows(), points_.cols());
  all.topRows(points_.rows()) = points_;
  all.bottomRows(extra.rows()) = extra;
  std::optional<std::vector<int>> truth;
  if (truth_) {
    truth = *truth_;
    truth->resize(static_cast<std::size_t>(all.rows()), kNoise);
  }
  return Dataset(std::move(all), names_, std::move(truth));
}

// ---------------------------------------------------------------------------
// Clustering

Clustering::Clustering(std::vector<int> labels) : labels_(std::move(labels)) {
  int max_label = -1;
  for (int& l : labels_) {
    if (l < 0) l = kNoise;
    max_label = std::max(max_label, l);
  }
  std::vector<char> seen(static_cast<std::size_t>(max_label + 1), 0);
  for (int l : labels_)
    if (l >= 0) seen[static_cast<std::size_t>(l)] = 1;
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error("cluster labels are not contiguous from 0");
  }
  m_ = max_label + 1;
}

Clustering Clustering::from_raw(std::span<const int> raw) {
  std::vector<int> distinct;
  for (int l : raw)
    if (l >= 0) distinct.push_back(l);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> labels(raw.size(), kNoise);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) continue;
    labels[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), raw[i]) - distinct.begin());
  }
  return Clustering(std::move(labels));
}

std::size_t Clustering::num_assigned() const {
  return static_cast<std::size_t>(std::count_if(labels_.begin(), labels_.end(), [](int l) { return l >= 0; }));
}

std::vector<std::vector<int>> Clustering::members() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(m_));
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] >= 0) out[static_cast<std::size_t>(labels_[i])].push_back(static_cast<int>(i));
  return out;
}

Clustering Clustering::prefix(std::size_t n) const {
  n = std::min(n, labels_.size());
  return from_raw(std::span<const int>(labels_.data(), n));
}

// ---------------------------------------------------------------------------
// PMF

void validate_pmf(std::span<const double> p) {
  if (p.empty()) throw Error("empty PMF");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("PMF has a negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error("PMF does not sum to 1");
}

PMF cluster_pmf(const Clustering& c) {
  const std::size_t assigned = c.num_assigned();
  if (c.num_clusters() < 1 || assigned == 0) throw Error("empty partition");
  std::vector<std::size_t> counts(static_cast<std::size_t>(c.num_clusters()), 0);
  for (int l : c.labels())
    if (l >= 0) ++counts[static_cast<std::size_t>(l)];
  PMF p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(assigned);
  return p;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

using Cost = __int128;

// Rectangular assignment, rows <= cols, minimising total cost. Returns the
// column assigned to each row. Classic potentials formulation, O(rows^2 cols).
std::vector<int> hungarian(const std::vector<std::vector<Cost>>& cost) {
  const std::size_t n = cost.size();
  const std::size_t m = n == 0 ? 0 : cost[0].size();
  constexpr Cost kInf = static_cast<Cost>(std::numeric_limits<long long>::max()) *
                        static_cast<Cost>(std::numeric_limits<int>::max());
  std::vector<Cost> u(n + 1, 0), v(m + 1, 0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<Cost> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      Cost delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const Cost cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

}  // namespace

ClusterMatching match_clusters(const Clustering& a, const Clustering& b) {
  const int na = a.num_clusters();
  const int nb = b.num_clusters();
  ClusterMatching result;
  result.b_to_a.assign(static_cast<std::size_t>(nb), -1);

  // Sparse contingency: only pairs that actually co-occur.
  std::map<std::pair<int, int>, long long> overlap;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int la = a.label(i), lb = b.label(i);
    if (la >= 0 && lb >= 0) ++overlap[{lb, la}];
  }

  if (na > 0 && nb > 0) {
    const bool b_rows = nb <= na;
    const int rows = b_rows ? nb : na;
    const int cols = b_rows ? na : nb;
    const Cost scale = static_cast<Cost>(std::min(na, nb)) * static_cast<Cost>(na + nb) + 1;
    std::vector<std::vector<Cost>> cost(static_cast<std::size_t>(rows),
                                        std::vector<Cost>(static_cast<std::size_t>(cols), 0));
    for (const auto& [key, count] : overlap) {
      const auto [lb, la] = key;
      const int r = b_rows ? lb : la;
      const int c = b_rows ? la : lb;
      cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          -static_cast<Cost>(count) * scale + static_cast<Cost>(la + lb);
    }
    const std::vector<int> assignment = hungarian(cost);
    for (int r = 0; r < rows; ++r) {
      const int c = assignment[static_cast<std::size_t>(r)];
      const int lb = b_rows ? r : c;
      const int la = b_rows ? c : r;
      auto it = overlap.find({lb, la});
      if (it == overlap.end()) continue;  // zero overlap: left unmatched
      result.b_to_a[static_cast<std::size_t>(lb)] = la;
      result.overlap += it->second;
    }
  }

  int fresh = na;
  for (int& target : result.b_to_a)
    if (target < 0) target = fresh++;
  return result;
}

double moved_fraction(const Clustering& a, const Clustering& b) {
  const ClusterMatching match = match_clusters(a, b);
  std::size_t assigned = 0, moved = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int la = a.label(i);
    if (la < 0) continue;
    ++assigned;
    const int lb = i < b.size() ? b.label(i) : kNoise;
    if (lb < 0 || match.b_to_a[static_cast<std::size_t>(lb)] != la) ++moved;
  }
  return assigned == 0 ? 0.0 : static_cast<double>(moved) / static_cast<double>(assigned);
}

// ---------------------------------------------------------------------------
// Confidence intervals

std::string_view to_string(Statistic s) { return s == Statistic::z ? "z" : "t"; }

double ci_multiplier(Statistic statistic, std::size_t n) {
  if (statistic == Statistic::z) return 2.0;
  if (n < 2) throw Error("insufficient samples");
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(boost::math::complement(dist, 0.025));
}

ConfidenceInterval confidence_interval(std::span<const double> samples, Statistic statistic) {
  if (samples.size() < 2) throw Error("insufficient samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  ConfidenceInterval ci;
  ci.mean = mean;
  ci.half_width = ci_multiplier(statistic, samples.size()) * sd / std::sqrt(n);
  ci.n_samples = samples.size();
  ci.statistic = statistic;
  ci.level = 0.95;
  return ci;
}

// ---------------------------------------------------------------------------
// Ledger

std::string_view to_string(Feature f) {
  switch (f) {
    case Feature::stability: return "stability";
    case Feature::noise: return "noise";
    case Feature::complexity: return "complexity";
    case Feature::homogeneity: return "homogeneity";
    case Feature::distance: return "distance";
    case Feature::covolume: return "covolume";
    case Feature::shape: return "shape";
  }
  return "unknown";
}

Feature parse_feature(std::string_view name) {
  for (Feature f : kAllFeatures)
    if (to_string(f) == name) return f;
  throw Error("unknown feature '" + std::string(name) + "'");
}

double scale_score(double raw, const LedgerEntry& entry) {
  return entry.alpha * std::pow(std::abs(raw - entry.beta), entry.weight);
}

Ledger Ledger::defaults() {
  Ledger l;
  l.params_[Feature::stability] = {100.0 / std::sqrt(2.0), 0.5, 0.5};
  l.params_[Feature::noise] = {std::nullopt, std::nullopt, 1.25};
  l.params_[Feature::complexity] = {50.0, 4.0, 2.0};
  l.params_[Feature::homogeneity] = {std::nullopt, std::nullopt, 1.1};
  l.params_[Feature::distance] = {std::nullopt, 0.0, 1.0};
  l.params_[Feature::covolume] = {100.0, 0.0, 2.0};
  l.params_[Feature::shape] = {std::nullopt, std::nullopt, 2.0};
  return l;
}

void Ledger::set(Feature f, const Params& p) {
  if (p.alpha && !(*p.alpha > 0.0)) throw Error("ledger alpha must be positive for " + std::string(to_string(f)));
  if (p.weight && !(*p.weight > 0.0)) throw Error("ledger weight must be positive for " + std::string(to_string(f)));
  params_[f] = p;
}

void Ledger::merge(const Ledger& overrides) {
  for (const auto& [f, p] : overrides.params_) {
    Params merged = params_.count(f) ? params_[f] : Params{};
    if (p.alpha) merged.alpha = p.alpha;
    if (p.beta) merged.beta = p.beta;
    if (p.weight) merged.weight = p.weight;
    set(f, merged);
  }
}

Ledger Ledger::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("ledger file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("ledger document must be an object keyed by feature name");
  Ledger l;
  for (const auto& [key, value] : doc.items()) {
    const Feature f = parse_feature(key);
    if (!value.is_object()) throw Error("ledger entry '" + key + "' must be an object");
    Params p;
    for (const auto& [field, v] : value.items()) {
      if (!v.is_number()) throw Error("ledger field '" + key + "." + field + "' must be a number");
      if (field == "alpha") p.alpha = v.get<double>();
      else if (field == "beta") p.beta = v.get<double>();
      else if (field == "weight") p.weight = v.get<double>();
      else throw Error("unknown ledger field '" + key + "." + field + "'");
    }
    l.set(f, p);
  }
  return l;
}

Ledger Ledger::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ledger file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

LedgerEntry Ledger::resolve(Feature f, std::optional<double> derived_alpha,
                            std::optional<double> derived_beta) const {
  const Params& p = params(f);
  const auto alpha = p.alpha ? p.alpha : derived_alpha;
  const auto beta = p.beta ? p.beta : derived_beta;
  if (!alpha || !beta || !p.weight) {
    throw Error("ledger parameters for " + std::string(to_string(f)) + " are unresolved");
  }
  if (!(*alpha > 0.0) || !std::isfinite(*alpha)) {
    throw Error("ledger alpha for " + std::string(to_string(f)) + " is not a positive finite number");
  }
  return LedgerEntry{f, *alpha, *beta, *p.weight};
}

FeatureScore make_score(Feature f, double raw, const LedgerEntry& entry, std::optional<ConfidenceInterval> ci) {
  FeatureScore s;
  s.feature = f;
  s.raw = raw;
  s.ci = ci;
  s.entry = entry;
  s.points = scale_score(raw, entry);
  return s;
}

}  // namespace decathlon
