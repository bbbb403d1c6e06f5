#pragma once

#include "decathlon/core.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace testing {

using decathlon::PointMatrix;

// Radical inverse in base b: low-discrepancy coordinates for the area oracle.
inline double halton(std::uint64_t i, std::uint64_t b) {
  double f = 1.0, r = 0.0;
  for (; i > 0; i /= b) {
    f /= static_cast<double>(b);
    r += f * static_cast<double>(i % b);
  }
  return r;
}

// Supporting lines/planes of conv(x), found by brute force over point pairs or
// triples. A sample outside any of them is outside the hull.
struct Halfspace {
  Eigen::Vector3d normal;
  double offset;
};

inline std::vector<Halfspace> supporting_halfspaces(const PointMatrix& x) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  std::vector<Halfspace> out;
  auto point = [&](int i) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int k = 0; k < d; ++k) p(k) = x(i, k);
    return p;
  };
  auto consider = [&](Eigen::Vector3d normal, const Eigen::Vector3d& on) {
    if (normal.norm() < 1e-12) return;
    normal.normalize();
    double lo = 0, hi = 0;
    for (int k = 0; k < n; ++k) {
      const double s = normal.dot(point(k) - on);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (hi <= 1e-12) out.push_back({normal, normal.dot(on)});
    else if (lo >= -1e-12) out.push_back({-normal, -normal.dot(on)});
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (d == 2) {
        const Eigen::Vector3d e = point(j) - point(i);
        consider(Eigen::Vector3d(e.y(), -e.x(), 0.0), point(i));
        continue;
      }
      for (int k = j + 1; k < n; ++k) consider((point(j) - point(i)).cross(point(k) - point(i)), point(i));
    }
  return out;
}

// Points in a spherical shell of radii [0.7, 1]: random hulls that fill a
// reasonable share of their bounding box, so the sampling oracle stays sharp.
inline PointMatrix shell_points(std::mt19937_64& rng, int n, int d) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> r(0.7, 1.0);
  PointMatrix x(n, d);
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd v(d);
    for (int k = 0; k < d; ++k) v(k) = g(rng);
    x.row(i) = r(rng) * v.normalized();
  }
  return x;
}

inline double monte_carlo_measure(const PointMatrix& x, int samples) {
  const auto planes = supporting_halfspaces(x);
  const Eigen::RowVectorXd lo = x.colwise().minCoeff(), hi = x.colwise().maxCoeff();
  const double box = (hi - lo).prod();
  const std::uint64_t bases[3] = {2, 3, 5};
  int inside = 0;
  for (int s = 1; s <= samples; ++s) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int k = 0; k < x.cols(); ++k) p(k) = lo(k) + halton(static_cast<std::uint64_t>(s), bases[k]) * (hi(k) - lo(k));
    bool in = true;
    for (const auto& h : planes)
      if (h.normal.dot(p) > h.offset) {
        in = false;
        break;
      }
    inside += in;
  }
  return box * inside / samples;
}

}  // namespace testing
