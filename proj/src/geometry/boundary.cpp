#include "decathlon/geometry.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <tuple>

namespace decathlon {

namespace {

const double* row_ptr(const PointMatrix& x, int i) { return x.data() + static_cast<Eigen::Index>(i) * x.cols(); }

double median_mst_edge(const PointMatrix& x) {
  const Tree t = euclidean_mst(x);
  std::vector<double> w;
  for (const auto& e : t.edges)
    if (e.weight > 0.0) w.push_back(e.weight);
  if (w.empty()) return 0.0;
  const std::size_t mid = w.size() / 2;
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid), w.end());
  double m = w[mid];
  if (w.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

// Closed-segment intersection test with exact orientation signs.
bool on_segment(const double* a, const double* b, const double* p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
         p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const double* a, const double* b, const double* c, const double* d) {
  const int o1 = predicates::orient2d(a, b, c), o2 = predicates::orient2d(a, b, d);
  const int o3 = predicates::orient2d(c, d, a), o4 = predicates::orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

Polygon boundary_2d(const PointMatrix& x, const BoundaryOptions& options) {
  if (x.cols() != 2) throw Error("boundary_2d: points must be 2D");
  const auto tris = delaunay_2d(x);
  if (tris.empty()) throw Error("degenerate boundary");

  // Directed edge (u, v) as it appears in a counter-clockwise triangle.
  std::map<std::pair<int, int>, int> owner;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    for (int i = 0; i < 3; ++i)
      owner[{tris[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)],
             tris[static_cast<std::size_t>(t)][static_cast<std::size_t>((i + 1) % 3)]}] = t;

  std::vector<char> alive(tris.size(), 1);
  std::vector<char> on_boundary(static_cast<std::size_t>(x.rows()), 0);
  auto is_boundary_edge = [&](int u, int v) {
    const auto it = owner.find({u, v});
    if (it == owner.end() || !alive[static_cast<std::size_t>(it->second)]) return false;
    const auto rev = owner.find({v, u});
    return rev == owner.end() || !alive[static_cast<std::size_t>(rev->second)];
  };

  using Candidate = std::tuple<double, int, int>;  // length, u, v
  std::priority_queue<Candidate> queue;
  auto length = [&](int u, int v) { return (x.row(u) - x.row(v)).norm(); };
  for (const auto& [edge, t] : owner) {
    if (!is_boundary_edge(edge.first, edge.second)) continue;
    on_boundary[static_cast<std::size_t>(edge.first)] = 1;
    on_boundary[static_cast<std::size_t>(edge.second)] = 1;
    queue.emplace(length(edge.first, edge.second), edge.first, edge.second);
  }

  if (options.prune_factor > 0.0) {
    const double threshold = options.prune_factor * median_mst_edge(x);
    while (!queue.empty()) {
      const auto [len, u, v] = queue.top();
      if (len <= threshold) break;
      queue.pop();
      if (!is_boundary_edge(u, v)) continue;
      const int t = owner.at({u, v});
      const auto& tri = tris[static_cast<std::size_t>(t)];
      int w = -1;
      for (int k : tri)
        if (k != u && k != v) w = k;
      // Removing a triangle whose apex is already on the boundary would pinch
      // the polygon or strand a point outside it.
      if (on_boundary[static_cast<std::size_t>(w)]) continue;
      alive[static_cast<std::size_t>(t)] = 0;
      on_boundary[static_cast<std::size_t>(w)] = 1;
      // The neighbours across (v, w) and (w, u) now own boundary edges.
      queue.emplace(length(v, w), w, v);
      queue.emplace(length(w, u), u, w);
    }
  }

  std::map<int, int> next;
  for (const auto& [edge, t] : owner)
    if (is_boundary_edge(edge.first, edge.second)) next[edge.first] = edge.second;

  Polygon poly;
  const int start = next.begin()->first;
  int cur = start;
  do {
    poly.vertices.push_back(cur);
    cur = next.at(cur);
    if (poly.vertices.size() > next.size()) throw Error("degenerate boundary");
  } while (cur != start);
  if (poly.vertices.size() != next.size()) throw Error("degenerate boundary");
  return poly;
}

bool is_simple_polygon(const PointMatrix& x, const Polygon& poly) {
  const std::size_t n = poly.vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const int a = poly.vertices[i], b = poly.vertices[j];
      if (a == b || (x(a, 0) == x(b, 0) && x(a, 1) == x(b, 1))) return false;
    }
  for (std::size_t i = 0; i < n; ++i) {
    const double* a = row_ptr(x, poly.vertices[i]);
    const double* b = row_ptr(x, poly.vertices[(i + 1) % n]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* c = row_ptr(x, poly.vertices[j]);
      const double* d = row_ptr(x, poly.vertices[(j + 1) % n]);
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (!adjacent) {
        if (segments_intersect(a, b, c, d)) return false;
        continue;
      }
      // Adjacent edges share one endpoint; they must not fold back onto each other.
      const double* shared = j == i + 1 ? b : a;
      const double* other_first = j == i + 1 ? a : b;
      const double* other_second = j == i + 1 ? d : c;
      if (predicates::orient2d(other_first, shared, other_second) == 0) {
        const Eigen::Vector2d u(other_first[0] - shared[0], other_first[1] - shared[1]);
        const Eigen::Vector2d v(other_second[0] - shared[0], other_second[1] - shared[1]);
        if (u.dot(v) > 0.0) return false;
      }
    }
  }
  return true;
}

bool polygon_contains(const PointMatrix& x, const Polygon& poly, const Eigen::Vector2d& p) {
  const std::size_t n = poly.vertices.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double* a = row_ptr(x, poly.vertices[i]);
    const double* b = row_ptr(x, poly.vertices[j]);
    if (predicates::orient2d(a, b, p.data()) == 0 && on_segment(a, b, p.data())) return true;
    if ((a[1] > p.y()) != (b[1] > p.y())) {
      // Crossing test via orientation: the edge crosses the rightward ray.
      const int o = predicates::orient2d(b, a, p.data());
      if ((a[1] > b[1]) == (o > 0)) inside = !inside;
    }
  }
  return inside;
}

}  // namespace decathlon
