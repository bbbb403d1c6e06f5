#include "decathlon/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace decathlon {

namespace {

constexpr int kGhost = -1;

struct Triangle {
  std::array<int, 3> v{};
  std::array<int, 3> nbr{-1, -1, -1};  // nbr[i] is across the edge opposite v[i]
  bool alive = true;

  bool ghost() const { return v[0] == kGhost || v[1] == kGhost || v[2] == kGhost; }
  int index_of(int vertex) const {
    for (int i = 0; i < 3; ++i)
      if (v[static_cast<std::size_t>(i)] == vertex) return i;
    return -1;
  }
};

// Bowyer-Watson insertion with ghost triangles on the hull edges, so points
// outside the current hull need no bounding super-triangle.
class DelaunayBuilder {
 public:
  explicit DelaunayBuilder(const PointMatrix& x) : x_(x) {}

  std::vector<std::array<int, 3>> run() {
    const int n = static_cast<int>(x_.rows());
    if (n < 3) return {};
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(0x5DEECE66DULL);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    // Seed triangle: first point, first distinct point, first non-collinear point.
    const int a = order[0];
    int b = -1, c = -1;
    for (int i : order)
      if (!same(i, a)) {
        b = i;
        break;
      }
    if (b < 0) return {};
    for (int i : order)
      if (i != a && i != b && predicates::orient2d(p(a), p(b), p(i)) != 0) {
        c = i;
        break;
      }
    if (c < 0) return {};
    seed(a, b, c);

    for (int i : order) {
      if (i == a || i == b || i == c) continue;
      insert(i);
    }

    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris_)
      if (t.alive && !t.ghost()) out.push_back(t.v);
    return out;
  }

 private:
  const double* p(int i) const { return x_.data() + static_cast<Eigen::Index>(i) * x_.cols(); }
  bool same(int i, int j) const { return x_(i, 0) == x_(j, 0) && x_(i, 1) == x_(j, 1); }

  void seed(int a, int b, int c) {
    if (predicates::orient2d(p(a), p(b), p(c)) < 0) std::swap(b, c);
    std::vector<std::array<int, 3>> fresh = {{a, b, c}, {b, a, kGhost}, {c, b, kGhost}, {a, c, kGhost}};
    for (const auto& v : fresh) tris_.push_back(Triangle{v});
    link_all();
    last_solid_ = 0;
  }

  // Full adjacency rebuild, used once for the seed.
  void link_all() {
    std::map<std::pair<int, int>, std::pair<int, int>> edges;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      for (int i = 0; i < 3; ++i) {
        const auto& v = tris_[static_cast<std::size_t>(t)].v;
        edges[{v[static_cast<std::size_t>((i + 1) % 3)], v[static_cast<std::size_t>((i + 2) % 3)]}] = {t, i};
      }
    for (auto& t : tris_)
      for (int i = 0; i < 3; ++i) {
        const int u = t.v[static_cast<std::size_t>((i + 1) % 3)], w = t.v[static_cast<std::size_t>((i + 2) % 3)];
        t.nbr[static_cast<std::size_t>(i)] = edges.at({w, u}).first;
      }
  }

  bool in_conflict(const Triangle& t, int q) const {
    if (!t.ghost()) return predicates::incircle(p(t.v[0]), p(t.v[1]), p(t.v[2]), p(q)) > 0;
    const int g = t.index_of(kGhost);
    const int u = t.v[static_cast<std::size_t>((g + 1) % 3)], w = t.v[static_cast<std::size_t>((g + 2) % 3)];
    const int o = predicates::orient2d(p(u), p(w), p(q));
    if (o != 0) return o > 0;
    // Collinear with the hull edge: conflict only strictly inside the segment.
    for (int k = 0; k < 2; ++k) {
      const double lo = std::min(x_(u, k), x_(w, k)), hi = std::max(x_(u, k), x_(w, k));
      if (lo != hi) return x_(q, k) > lo && x_(q, k) < hi;
    }
    return false;
  }

  // Visibility walk through solid triangles. Returns a triangle in conflict
  // with q, or -1 when q duplicates an existing vertex.
  int locate(int q) const {
    int t = last_solid_;
    std::size_t guard = 0;
    while (true) {
      const Triangle& tri = tris_[static_cast<std::size_t>(t)];
      int step = -1;
      for (int i = 0; i < 3; ++i) {
        const int u = tri.v[static_cast<std::size_t>((i + 1) % 3)], w = tri.v[static_cast<std::size_t>((i + 2) % 3)];
        if (predicates::orient2d(p(u), p(w), p(q)) < 0) {
          step = i;
          break;
        }
      }
      if (step < 0) {
        for (int v : tri.v)
          if (same(v, q)) return -1;
        return t;
      }
      t = tri.nbr[static_cast<std::size_t>(step)];
      if (tris_[static_cast<std::size_t>(t)].ghost()) return t;
      if (++guard > 4 * tris_.size() + 16) throw Error("delaunay: point location did not terminate");
    }
  }

  void insert(int q) {
    const int start = locate(q);
    if (start < 0) return;  // duplicate point

    struct BoundaryEdge {
      int u, w, outside;
    };
    std::vector<int> cavity{start};
    std::vector<char> state(tris_.size(), 0);  // 1 = in cavity, 2 = rejected
    state[static_cast<std::size_t>(start)] = 1;
    std::vector<BoundaryEdge> boundary;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const int t = cavity[k];
      for (int i = 0; i < 3; ++i) {
        const Triangle& tri = tris_[static_cast<std::size_t>(t)];
        const int nb = tri.nbr[static_cast<std::size_t>(i)];
        auto& s = state[static_cast<std::size_t>(nb)];
        if (s == 0) {
          s = in_conflict(tris_[static_cast<std::size_t>(nb)], q) ? 1 : 2;
          if (s == 1) cavity.push_back(nb);
        }
        if (s == 2) {
          boundary.push_back({tri.v[static_cast<std::size_t>((i + 1) % 3)], tri.v[static_cast<std::size_t>((i + 2) % 3)], nb});
        }
      }
    }

    for (int t : cavity) tris_[static_cast<std::size_t>(t)].alive = false;

    std::map<std::pair<int, int>, std::pair<int, int>> spokes;  // directed edge -> (triangle, slot)
    for (const auto& e : boundary) {
      const int id = static_cast<int>(tris_.size());
      Triangle t{{e.u, e.w, q}};
      t.nbr[2] = e.outside;  // opposite q
      tris_.push_back(t);
      // Repoint the outside triangle across edge (w, u).
      Triangle& out = tris_[static_cast<std::size_t>(e.outside)];
      for (int i = 0; i < 3; ++i) {
        if (out.v[static_cast<std::size_t>((i + 1) % 3)] == e.w && out.v[static_cast<std::size_t>((i + 2) % 3)] == e.u) {
          out.nbr[static_cast<std::size_t>(i)] = id;
        }
      }
      spokes[{e.w, q}] = {id, 0};  // edge opposite u
      spokes[{q, e.u}] = {id, 1};  // edge opposite w
      if (e.u != kGhost && e.w != kGhost) last_solid_ = id;
    }
    for (const auto& [edge, slot] : spokes) {
      const auto twin = spokes.find({edge.second, edge.first});
      if (twin == spokes.end()) throw Error("delaunay: cavity is not star-shaped");
      tris_[static_cast<std::size_t>(slot.first)].nbr[static_cast<std::size_t>(slot.second)] = twin->second.first;
    }
  }

  const PointMatrix& x_;
  std::vector<Triangle> tris_;
  int last_solid_ = 0;
};

}  // namespace

std::vector<std::array<int, 3>> delaunay_2d(const PointMatrix& x) {
  if (x.cols() != 2) throw Error("delaunay_2d: points must be 2D");
  return DelaunayBuilder(x).run();
}

}  // namespace decathlon
