#pragma once

#include "decathlon/core.hpp"
#include "decathlon/geometry.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace decathlon {

// ---------------------------------------------------------------------------
// Quadrature

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule.
const GaussRule& gauss_legendre(int n);

// ---------------------------------------------------------------------------
// Closed curves

/// Closed chain of cubic Bezier segments; segment j ends where j+1 starts.
struct ClosedCurve {
  std::vector<std::array<Eigen::Vector2d, 4>> segments;

  Eigen::Vector2d position(std::size_t seg, double t) const;
  Eigen::Vector2d first_derivative(std::size_t seg, double t) const;
  Eigen::Vector2d second_derivative(std::size_t seg, double t) const;
};

/// Periodic C2 cubic spline through `vertices` in order, chord-length
/// parametrized, split into Bezier segments. Needs at least 4 distinct
/// consecutive vertices.
ClosedCurve fit_closed_curve(const std::vector<Eigen::Vector2d>& vertices);
ClosedCurve fit_closed_curve(const PointMatrix& x, const Polygon& boundary);

/// Integral of squared curvature over arc length. Gauss-Legendre with 32
/// nodes per segment, doubled until successive totals agree within 0.1%.
double curve_bending_energy(const ClosedCurve& curve);

// ---------------------------------------------------------------------------
// Surfaces

/// Bicubic clamped uniform B-spline patch over [0, 1]^2. net[i][j] is the
/// control point at row i (u direction) and column j (v direction).
struct SurfacePatch {
  std::vector<std::vector<Eigen::Vector3d>> net;

  int rows() const { return static_cast<int>(net.size()); }
  int cols() const { return net.empty() ? 0 : static_cast<int>(net.front().size()); }
};

/// Throws unless the net is rectangular and at least 4 x 4.
void validate_patch(const SurfacePatch& patch);

struct SurfaceDerivatives {
  Eigen::Vector3d s, su, sv, suu, suv, svv;
};

SurfaceDerivatives evaluate_patch(const SurfacePatch& patch, double u, double v);

/// 2H^2 - K = (k1^2 + k2^2) / 2 from the first and second fundamental forms.
double surface_curvature_integrand(const SurfacePatch& patch, double u, double v);

/// Integral of (2H^2 - K) over the surface area, Gauss-Legendre per knot
/// cell (32 x 32, doubled until successive totals agree within 0.1%).
double surface_shape_integral(const SurfacePatch& patch);

/// Rows "i,j,x,y,z" (optional header) covering a full rectangular grid.
SurfacePatch read_control_net(std::istream& in);
SurfacePatch load_control_net(const std::string& path);

// ---------------------------------------------------------------------------
// Shape score

struct ShapeSummary {
  /// Bending energy per cluster; NaN for clusters that were skipped.
  std::vector<double> per_cluster;
  std::vector<std::string> skipped;  // "cluster i: reason"
  int scored = 0;
  double total = 0.0;
  double alpha = 0.0;  // 1 / max per-cluster value
  double beta = 0.0;   // 8 pi * scored clusters
};

/// Boundary, closed curve and bending energy per cluster of a 2D dataset.
ShapeSummary shape_summary(const Dataset& x, const Clustering& c, int threads = 1,
                           const BoundaryOptions& options = {});

FeatureScore shape_score(const Dataset& x, const Clustering& c, int threads = 1,
                         const Ledger& ledger = Ledger::defaults());

}  // namespace decathlon
