#pragma once

#include "decathlon/core.hpp"

#include <vector>

namespace decathlon {

// ---------------------------------------------------------------------------
// Homogeneity

/// Mean and population variance of a cluster's MST edge weights.
struct ClusterMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
};

/// Upper half-plane distance arcosh(1 + |p - q|^2 / (2 p_y q_y)).
double hyperbolic_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q);

/// Fisher-Rao distance between normals given as (mean, stddev).
double fisher_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

inline constexpr int kDefaultCoreK = 5;

/// Moments of the mutual-reachability MST over `members` (k clamped to
/// |members| - 1). Requires at least 2 members.
ClusterMoments cluster_moments(const PointMatrix& x, std::span<const int> members, int k = kDefaultCoreK);

/// Distance from N(mu, sigma2 + 1) to N(0, 1) in the Fisher metric.
double homogeneity_from_moments(const ClusterMoments& m);

/// 0 for singletons.
double cluster_homogeneity(const PointMatrix& x, std::span<const int> members, int k = kDefaultCoreK);

struct HomogeneitySummary {
  std::vector<double> h;
  double G = 1.0;
  double G_max = 1.0;
};

HomogeneitySummary homogeneity_summary(const Dataset& x, const Clustering& c, int k = kDefaultCoreK);

/// raw = G = 1 + sum h, scored against beta = G_max = 1 + m max h and
/// alpha = 100 / G_max. G_max = 1 scores 0.
FeatureScore homogeneity(const Dataset& x, const Clustering& c, int k = kDefaultCoreK,
                         const Ledger& ledger = Ledger::defaults());

// ---------------------------------------------------------------------------
// Separation

/// Smallest point-to-point distance between clusters i and j.
double intercluster_distance(const Dataset& x, const Clustering& c, int i, int j);

struct SeparationSummary {
  Eigen::MatrixXd pairwise;
  double D = 0.0;
  double D_max = 0.0;
};

/// D sums the pairwise minima over i < j; D_max = C(m, 2) * diameter(x).
SeparationSummary separation_summary(const Dataset& x, const Clustering& c);

/// raw = D with alpha = 100 / (1 + D_max). Fewer than 2 clusters gives 0
/// points and a flag.
FeatureScore separation(const Dataset& x, const Clustering& c, const Ledger& ledger = Ledger::defaults());

// ---------------------------------------------------------------------------
// Covolume

/// (V(X) - sum V(C_i)) / V(X) clamped to [0, 1], hull measures in 2D or 3D.
double covolume_ratio(const Dataset& x, const Clustering& c);

FeatureScore covolume(const Dataset& x, const Clustering& c, const Ledger& ledger = Ledger::defaults());

}  // namespace decathlon
