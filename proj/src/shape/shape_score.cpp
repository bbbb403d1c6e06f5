#include "decathlon/shape.hpp"

#include "decathlon/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace decathlon {

ShapeSummary shape_summary(const Dataset& x, const Clustering& c, int threads, const BoundaryOptions& options) {
  if (x.dim() != 2) throw Error("shape: only 2D datasets are supported");
  if (c.size() != static_cast<std::size_t>(x.size())) throw Error("clustering does not match the dataset size");
  const auto groups = c.members();
  ShapeSummary s;
  s.per_cluster.assign(groups.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> reasons(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t g) {
    PointMatrix pts(static_cast<Eigen::Index>(groups[g].size()), 2);
    for (std::size_t i = 0; i < groups[g].size(); ++i) pts.row(static_cast<Eigen::Index>(i)) = x.points().row(groups[g][i]);
    try {
      const Polygon poly = boundary_2d(pts, options);
      s.per_cluster[g] = curve_bending_energy(fit_closed_curve(pts, poly));
    } catch (const Error& e) {
      reasons[g] = e.what();
    }
  });
  double max_value = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (std::isnan(s.per_cluster[g])) {
      s.skipped.push_back("cluster " + std::to_string(g) + ": " + reasons[g]);
      continue;
    }
    ++s.scored;
    s.total += s.per_cluster[g];
    max_value = std::max(max_value, s.per_cluster[g]);
  }
  if (s.scored == 0) throw Error("shape: no cluster admits a boundary");
  s.alpha = 1.0 / max_value;
  s.beta = 8.0 * std::numbers::pi * s.scored;
  return s;
}

FeatureScore shape_score(const Dataset& x, const Clustering& c, int threads, const Ledger& ledger) {
  const ShapeSummary s = shape_summary(x, c, threads);
  FeatureScore score = make_score(Feature::shape, s.total, ledger.resolve(Feature::shape, s.alpha, s.beta));
  if (!s.skipped.empty()) {
    std::string flag = "skipped ";
    for (std::size_t i = 0; i < s.skipped.size(); ++i) flag += (i ? "; " : "") + s.skipped[i];
    score.flag = flag;
  }
  return score;
}

}  // namespace decathlon
