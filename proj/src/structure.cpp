#include "decathlon/structure.hpp"

#include "decathlon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace decathlon {

namespace {

PointMatrix gather(const PointMatrix& x, std::span<const int> rows) {
  PointMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

void check_cover(const Dataset& x, const Clustering& c) {
  if (c.size() != static_cast<std::size_t>(x.size())) throw Error("clustering does not match the dataset size");
}

}  // namespace

double hyperbolic_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  if (!(p.y() > 0.0) || !(q.y() > 0.0)) throw Error("hyperbolic_distance: y must be positive");
  return std::acosh(1.0 + (p - q).squaredNorm() / (2.0 * p.y() * q.y()));
}

double fisher_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  if (!(a.y() > 0.0) || !(b.y() > 0.0)) throw Error("fisher_distance: sigma must be positive");
  const double s = std::sqrt(2.0);
  return s * hyperbolic_distance({a.x() / s, a.y()}, {b.x() / s, b.y()});
}

ClusterMoments cluster_moments(const PointMatrix& x, std::span<const int> members, int k) {
  if (members.size() < 2) throw Error("cluster_moments: need at least 2 points");
  const PointMatrix pts = gather(x, members);
  const int kk = std::clamp(k, 1, static_cast<int>(members.size()) - 1);
  const Tree t = mutual_reachability_mst(pts, kk);
  ClusterMoments m;
  for (const auto& e : t.edges) m.mu += e.weight;
  m.mu /= static_cast<double>(t.edges.size());
  for (const auto& e : t.edges) m.sigma2 += (e.weight - m.mu) * (e.weight - m.mu);
  m.sigma2 /= static_cast<double>(t.edges.size());
  return m;
}

double homogeneity_from_moments(const ClusterMoments& m) {
  const double s = std::sqrt(m.sigma2 + 1.0);
  return std::sqrt(2.0) * std::acosh(1.0 + (m.mu * m.mu / 2.0 + (s - 1.0) * (s - 1.0)) / (2.0 * s));
}

double cluster_homogeneity(const PointMatrix& x, std::span<const int> members, int k) {
  if (members.size() < 2) return 0.0;
  return homogeneity_from_moments(cluster_moments(x, members, k));
}

HomogeneitySummary homogeneity_summary(const Dataset& x, const Clustering& c, int k) {
  check_cover(x, c);
  const auto groups = c.members();
  bool scoreable = false;
  HomogeneitySummary s;
  double h_max = 0.0;
  for (const auto& g : groups) {
    scoreable = scoreable || g.size() >= 2;
    s.h.push_back(cluster_homogeneity(x.points(), g, k));
    s.G += s.h.back();
    h_max = std::max(h_max, s.h.back());
  }
  if (!scoreable) throw Error("homogeneity undefined: every cluster is a singleton");
  s.G_max = 1.0 + static_cast<double>(groups.size()) * h_max;
  return s;
}

FeatureScore homogeneity(const Dataset& x, const Clustering& c, int k, const Ledger& ledger) {
  const HomogeneitySummary s = homogeneity_summary(x, c, k);
  const LedgerEntry entry = ledger.resolve(Feature::homogeneity, 100.0 / s.G_max, s.G_max);
  FeatureScore score = make_score(Feature::homogeneity, s.G, entry);
  if (s.G_max == 1.0 && !ledger.params(Feature::homogeneity).beta) {
    score.points = 0.0;
    score.flag = "all clusters perfectly homogeneous";
  }
  return score;
}

double intercluster_distance(const Dataset& x, const Clustering& c, int i, int j) {
  check_cover(x, c);
  if (i == j) throw Error("intercluster_distance: clusters must differ");
  if (i < 0 || j < 0 || i >= c.num_clusters() || j >= c.num_clusters())
    throw Error("intercluster_distance: empty cluster");
  const auto groups = c.members();
  const auto& a = groups[static_cast<std::size_t>(i)];
  const auto& b = groups[static_cast<std::size_t>(j)];
  double best = std::numeric_limits<double>::infinity();
  for (int p : a)
    for (int q : b) best = std::min(best, (x.points().row(p) - x.points().row(q)).norm());
  return best;
}

SeparationSummary separation_summary(const Dataset& x, const Clustering& c) {
  check_cover(x, c);
  const int m = c.num_clusters();
  SeparationSummary s;
  s.pairwise = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double d = intercluster_distance(x, c, i, j);
      s.pairwise(i, j) = s.pairwise(j, i) = d;
      s.D += d;
    }
  const double pairs = 0.5 * m * (m - 1.0);
  s.D_max = x.size() >= 2 ? pairs * hull_diameter(x.points()) : 0.0;
  return s;
}

FeatureScore separation(const Dataset& x, const Clustering& c, const Ledger& ledger) {
  const SeparationSummary s = separation_summary(x, c);
  FeatureScore score = make_score(Feature::distance, s.D, ledger.resolve(Feature::distance, 100.0 / (1.0 + s.D_max)));
  if (c.num_clusters() < 2) {
    score.points = 0.0;
    score.flag = "fewer than two clusters";
  }
  return score;
}

double covolume_ratio(const Dataset& x, const Clustering& c) {
  check_cover(x, c);
  const int dim = static_cast<int>(x.dim());
  if (dim != 2 && dim != 3) throw Error("covolume: unsupported dimension " + std::to_string(dim));
  const double total = convex_hull_measure(x.points(), dim);
  if (!(total > 0.0)) throw Error("covolume: dataset hull has zero measure");
  double parts = 0.0;
  for (const auto& g : c.members())
    if (static_cast<int>(g.size()) > dim) parts += convex_hull_measure(gather(x.points(), g), dim);
  return std::clamp((total - parts) / total, 0.0, 1.0);
}

FeatureScore covolume(const Dataset& x, const Clustering& c, const Ledger& ledger) {
  return make_score(Feature::covolume, covolume_ratio(x, c), ledger.resolve(Feature::covolume));
}

}  // namespace decathlon
