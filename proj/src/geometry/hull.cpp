#include "decathlon/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

namespace decathlon {

namespace {

const double* row_ptr(const PointMatrix& x, int i) { return x.data() + static_cast<Eigen::Index>(i) * x.cols(); }

bool collinear3(const PointMatrix& x, int a, int b, int c) {
  // Collinear in 3D iff every axis-aligned projection is collinear.
  for (int skip = 0; skip < 3; ++skip) {
    double pa[2], pb[2], pc[2];
    int t = 0;
    for (int k = 0; k < 3; ++k) {
      if (k == skip) continue;
      pa[t] = x(a, k);
      pb[t] = x(b, k);
      pc[t] = x(c, k);
      ++t;
    }
    if (predicates::orient2d(pa, pb, pc) != 0) return false;
  }
  return true;
}

}  // namespace

std::vector<int> convex_hull_2d(const PointMatrix& x) {
  if (x.cols() != 2) throw Error("convex_hull_2d: points must be 2D");
  const int n = static_cast<int>(x.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (x(a, 0) != x(b, 0)) return x(a, 0) < x(b, 0);
    if (x(a, 1) != x(b, 1)) return x(a, 1) < x(b, 1);
    return a < b;
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](int a, int b) { return x(a, 0) == x(b, 0) && x(a, 1) == x(b, 1); }),
              order.end());
  if (order.size() < 3) return order;

  std::vector<int> hull(2 * order.size());
  std::size_t k = 0;
  for (int p : order) {  // lower chain
    while (k >= 2 && predicates::orient2d(row_ptr(x, hull[k - 2]), row_ptr(x, hull[k - 1]), row_ptr(x, p)) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {  // upper chain
    const int p = order[i];
    while (k >= lower && predicates::orient2d(row_ptr(x, hull[k - 2]), row_ptr(x, hull[k - 1]), row_ptr(x, p)) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {};
  return hull;
}

std::vector<std::array<int, 3>> convex_hull_3d(const PointMatrix& x) {
  if (x.cols() != 3) throw Error("convex_hull_3d: points must be 3D");
  const int n = static_cast<int>(x.rows());
  if (n < 4) return {};

  // Initial tetrahedron from the first affinely independent points.
  const int i0 = 0;
  int i1 = -1, i2 = -1, i3 = -1;
  for (int i = 1; i < n && i1 < 0; ++i)
    if (x.row(i) != x.row(i0)) i1 = i;
  if (i1 < 0) return {};
  for (int i = 1; i < n && i2 < 0; ++i)
    if (i != i1 && !collinear3(x, i0, i1, i)) i2 = i;
  if (i2 < 0) return {};
  for (int i = 1; i < n && i3 < 0; ++i)
    if (predicates::orient3d(row_ptr(x, i0), row_ptr(x, i1), row_ptr(x, i2), row_ptr(x, i)) != 0) i3 = i;
  if (i3 < 0) return {};

  std::vector<std::array<int, 3>> faces;
  auto add_oriented = [&](int a, int b, int c, int inside) {
    // Outward means the interior point lies below the face plane.
    if (predicates::orient3d(row_ptr(x, a), row_ptr(x, b), row_ptr(x, c), row_ptr(x, inside)) > 0) {
      faces.push_back({a, b, c});
    } else {
      faces.push_back({a, c, b});
    }
  };
  add_oriented(i0, i1, i2, i3);
  add_oriented(i0, i1, i3, i2);
  add_oriented(i0, i2, i3, i1);
  add_oriented(i1, i2, i3, i0);

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& t = faces[f];
      if (predicates::orient3d(row_ptr(x, t[0]), row_ptr(x, t[1]), row_ptr(x, t[2]), row_ptr(x, p)) < 0) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    std::set<std::pair<int, int>> visible_edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const auto& t = faces[f];
      for (int e = 0; e < 3; ++e) visible_edges.insert({t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]});
    }
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() + 8);
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const auto& [u, v] : visible_edges)
      if (!visible_edges.count({v, u})) next.push_back({u, v, p});  // horizon edge
    faces = std::move(next);
  }
  return faces;
}

double convex_hull_measure(const PointMatrix& x, int dim) {
  if (dim != 2 && dim != 3) throw Error("unsupported dimension");
  if (x.cols() != dim) throw Error("convex_hull_measure: points do not have dimension " + std::to_string(dim));
  if (x.rows() < dim + 1) return 0.0;
  if (dim == 2) {
    const std::vector<int> hull = convex_hull_2d(x);
    if (hull.size() < 3) return 0.0;
    return std::abs(polygon_area(x, Polygon{hull}));
  }
  const auto faces = convex_hull_3d(x);
  if (faces.empty()) return 0.0;
  const Eigen::Vector3d ref = x.row(faces[0][0]).transpose();
  double volume = 0.0;
  for (const auto& f : faces) {
    const Eigen::Vector3d a = x.row(f[0]).transpose() - ref;
    const Eigen::Vector3d b = x.row(f[1]).transpose() - ref;
    const Eigen::Vector3d c = x.row(f[2]).transpose() - ref;
    volume += a.dot(b.cross(c));
  }
  return std::abs(volume) / 6.0;
}

double polygon_area(const PointMatrix& x, const Polygon& poly) {
  const std::size_t n = poly.vertices.size();
  if (n < 3) return 0.0;
  // Relative to the first vertex so large offsets do not cancel badly.
  const double ox = x(poly.vertices[0], 0), oy = x(poly.vertices[0], 1);
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int a = poly.vertices[i], b = poly.vertices[(i + 1) % n];
    twice += (x(a, 0) - ox) * (x(b, 1) - oy) - (x(b, 0) - ox) * (x(a, 1) - oy);
  }
  return 0.5 * twice;
}

}  // namespace decathlon
