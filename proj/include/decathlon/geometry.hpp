#pragma once

#include "decathlon/core.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace decathlon {

/// Euclidean distance sqrt((x-y)^T (x-y)) between two points of equal size.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar euclidean(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  if (x.size() != y.size()) throw Error("euclidean: dimension mismatch");
  return (x.derived().reshaped() - y.derived().reshaped()).norm();
}

/// Exact-sign geometric predicates. A double-precision filter decides the
/// easy cases; anything inside the rounding-error bound is re-evaluated in
/// exact rational arithmetic.
namespace predicates {

/// > 0 when a, b, c turn counter-clockwise, < 0 clockwise, 0 collinear.
int orient2d(const double* a, const double* b, const double* c);
/// > 0 when d lies strictly inside the circle through counter-clockwise a, b, c.
int incircle(const double* a, const double* b, const double* c, const double* d);
/// > 0 when d lies below the plane of a, b, c (a, b, c counter-clockwise
/// seen from above), matching Shewchuk's convention.
int orient3d(const double* a, const double* b, const double* c, const double* d);

}  // namespace predicates

// ---------------------------------------------------------------------------
// Distances

/// Distance from point i to its k-th nearest neighbour (excluding itself).
double core_distance(const PointMatrix& x, int i, int k);
/// core_distance for every point; O(N^2).
std::vector<double> core_distances(const PointMatrix& x, int k);
/// max(core_k(i), core_k(j), |x_i - x_j|).
double mutual_reachability(const PointMatrix& x, int i, int j, int k);

// ---------------------------------------------------------------------------
// Spanning trees

struct TreeEdge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 0.0;
};

struct Tree {
  std::vector<int> vertices;
  std::vector<TreeEdge> edges;  // sorted by (u, v)

  double total_weight() const;
};

using WeightFn = std::function<double(int, int)>;

/// Minimum spanning tree over `vertices` with a dense pairwise weight
/// (Prim, O(n^2)). Edges are totally ordered by (weight, min index, max
/// index) so the tree is unique.
Tree mst(std::span<const int> vertices, const WeightFn& weight);
/// Same contract, Kruskal with union-find. Kept as an independent route.
Tree mst_kruskal(std::span<const int> vertices, const WeightFn& weight);

/// Euclidean MST over all rows of x.
Tree euclidean_mst(const PointMatrix& x);
/// Mutual-reachability MST over all rows of x with core-distance parameter k.
Tree mutual_reachability_mst(const PointMatrix& x, int k);

// ---------------------------------------------------------------------------
// Hulls

/// Indices of the 2D convex hull vertices, counter-clockwise, no collinear
/// vertices. Fewer than 3 entries for degenerate input.
std::vector<int> convex_hull_2d(const PointMatrix& x);

/// Triangular faces of the 3D convex hull, outward oriented (counter-clockwise
/// seen from outside). Empty when all points are coplanar.
std::vector<std::array<int, 3>> convex_hull_3d(const PointMatrix& x);

/// Area (dim 2) or volume (dim 3) of the convex hull. Degenerate input gives
/// 0. Any other dim throws "unsupported dimension".
double convex_hull_measure(const PointMatrix& x, int dim);

/// Maximum pairwise Euclidean distance. Needs at least 2 points.
double hull_diameter(const PointMatrix& x);

// ---------------------------------------------------------------------------
// Triangulation and boundaries

/// Counter-clockwise triangles of the Delaunay triangulation of 2D points.
/// Duplicate points are left out of the triangulation. Cocircular ties are
/// resolved consistently (a point on a circumcircle is treated as outside).
std::vector<std::array<int, 3>> delaunay_2d(const PointMatrix& x);

/// Closed boundary loop of point indices, counter-clockwise, first vertex not
/// repeated at the end.
struct Polygon {
  std::vector<int> vertices;
};

/// Signed shoelace area of the polygon over the rows of x.
double polygon_area(const PointMatrix& x, const Polygon& poly);

struct BoundaryOptions {
  /// Delaunay boundary edges longer than factor * median Euclidean MST edge
  /// are peeled inward. Non-positive disables peeling (convex boundary).
  double prune_factor = 2.0;
};

/// Boundary polygon of a 2D cluster: Delaunay triangulation, then boundary
/// edges longer than the pruning threshold are removed one at a time
/// (longest first) as long as the polygon stays simple and every point
/// stays on or inside it. Throws "degenerate boundary" for collinear input.
Polygon boundary_2d(const PointMatrix& x, const BoundaryOptions& options = {});

/// True when the closed polygon has no self-intersections or repeated vertices.
bool is_simple_polygon(const PointMatrix& x, const Polygon& poly);
/// Even-odd containment with points on the boundary counted as inside.
bool polygon_contains(const PointMatrix& x, const Polygon& poly, const Eigen::Vector2d& p);

}  // namespace decathlon
