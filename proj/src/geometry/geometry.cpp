#include "decathlon/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

namespace decathlon {

// ---------------------------------------------------------------------------
// Distances

double core_distance(const PointMatrix& x, int i, int k) {
  const auto n = static_cast<int>(x.rows());
  if (i < 0 || i >= n) throw Error("core_distance: point index out of range");
  if (k < 1 || k > n - 1) throw Error("core_distance: k out of range");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 0; j < n; ++j)
    if (j != i) d.push_back((x.row(i) - x.row(j)).norm());
  std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
  return d[static_cast<std::size_t>(k - 1)];
}

std::vector<double> core_distances(const PointMatrix& x, int k) {
  const auto n = static_cast<int>(x.rows());
  if (k < 1 || k > n - 1) throw Error("core_distance: k out of range");
  std::vector<double> out(static_cast<std::size_t>(n));
  std::vector<double> d(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    std::size_t t = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) d[t++] = (x.row(i) - x.row(j)).norm();
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    out[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(k - 1)];
  }
  return out;
}

double mutual_reachability(const PointMatrix& x, int i, int j, int k) {
  if (i == j) throw Error("mutual_reachability: i and j must differ");
  const double dij = (x.row(i) - x.row(j)).norm();
  return std::max({core_distance(x, i, k), core_distance(x, j, k), dij});
}

// ---------------------------------------------------------------------------
// Spanning trees

double Tree::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.weight;
  return s;
}

namespace {

using EdgeKey = std::tuple<double, int, int>;

EdgeKey key(double w, int a, int b) { return {w, std::min(a, b), std::max(a, b)}; }

void finish(Tree& t) {
  std::sort(t.edges.begin(), t.edges.end(),
            [](const TreeEdge& a, const TreeEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
}

}  // namespace

Tree mst(std::span<const int> vertices, const WeightFn& weight) {
  Tree tree;
  tree.vertices.assign(vertices.begin(), vertices.end());
  const std::size_t n = vertices.size();
  if (n <= 1) return tree;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<char> in_tree(n, 0);
  std::vector<EdgeKey> best(n, EdgeKey{kInf, 0, 0});
  std::vector<std::size_t> parent(n, 0);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const EdgeKey k = key(weight(vertices[current], vertices[j]), vertices[current], vertices[j]);
      if (k < best[j]) {
        best[j] = k;
        parent[j] = current;
      }
    }
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!in_tree[j] && (next == n || best[j] < best[next])) next = j;
    in_tree[next] = 1;
    const int a = vertices[parent[next]], b = vertices[next];
    tree.edges.push_back({std::min(a, b), std::max(a, b), std::get<0>(best[next])});
    current = next;
  }
  finish(tree);
  return tree;
}

Tree mst_kruskal(std::span<const int> vertices, const WeightFn& weight) {
  Tree tree;
  tree.vertices.assign(vertices.begin(), vertices.end());
  const std::size_t n = vertices.size();
  if (n <= 1) return tree;

  struct Candidate {
    EdgeKey k;
    std::size_t a, b;
  };
  std::vector<Candidate> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      all.push_back({key(weight(vertices[i], vertices[j]), vertices[i], vertices[j]), i, j});
  std::sort(all.begin(), all.end(), [](const Candidate& x, const Candidate& y) { return x.k < y.k; });

  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (const auto& c : all) {
    const std::size_t ra = find(c.a), rb = find(c.b);
    if (ra == rb) continue;
    root[ra] = rb;
    tree.edges.push_back({std::get<1>(c.k), std::get<2>(c.k), std::get<0>(c.k)});
    if (tree.edges.size() == n - 1) break;
  }
  finish(tree);
  return tree;
}

Tree euclidean_mst(const PointMatrix& x) {
  std::vector<int> idx(static_cast<std::size_t>(x.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  return mst(idx, [&](int a, int b) { return (x.row(a) - x.row(b)).norm(); });
}

Tree mutual_reachability_mst(const PointMatrix& x, int k) {
  std::vector<int> idx(static_cast<std::size_t>(x.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  if (x.rows() < 2) return mst(idx, [](int, int) { return 0.0; });
  const std::vector<double> core = core_distances(x, k);
  return mst(idx, [&](int a, int b) {
    return std::max({core[static_cast<std::size_t>(a)], core[static_cast<std::size_t>(b)], (x.row(a) - x.row(b)).norm()});
  });
}

double hull_diameter(const PointMatrix& x) {
  if (x.rows() < 2) throw Error("hull_diameter: need at least 2 points");
  std::vector<int> candidates;
  if (x.cols() == 2) candidates = convex_hull_2d(x);
  if (candidates.size() < 2) {
    candidates.resize(static_cast<std::size_t>(x.rows()));
    std::iota(candidates.begin(), candidates.end(), 0);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      best = std::max(best, (x.row(candidates[i]) - x.row(candidates[j])).norm());
  return best;
}

}  // namespace decathlon
