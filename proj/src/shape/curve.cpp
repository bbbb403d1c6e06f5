#include "decathlon/shape.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace decathlon {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussRule>();
  rule->nodes.resize(static_cast<std::size_t>(n));
  rule->weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double step = pn / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    rule->nodes[lo] = -x;
    rule->nodes[hi] = x;
    rule->weights[lo] = rule->weights[hi] = w;
  }
  slot = std::move(rule);
  return *slot;
}

Eigen::Vector2d ClosedCurve::position(std::size_t seg, double t) const {
  const auto& b = segments.at(seg);
  const double s = 1.0 - t;
  return s * s * s * b[0] + 3.0 * s * s * t * b[1] + 3.0 * s * t * t * b[2] + t * t * t * b[3];
}

Eigen::Vector2d ClosedCurve::first_derivative(std::size_t seg, double t) const {
  const auto& b = segments.at(seg);
  const double s = 1.0 - t;
  return 3.0 * (s * s * (b[1] - b[0]) + 2.0 * s * t * (b[2] - b[1]) + t * t * (b[3] - b[2]));
}

Eigen::Vector2d ClosedCurve::second_derivative(std::size_t seg, double t) const {
  const auto& b = segments.at(seg);
  return 6.0 * ((1.0 - t) * (b[2] - 2.0 * b[1] + b[0]) + t * (b[3] - 2.0 * b[2] + b[1]));
}

ClosedCurve fit_closed_curve(const std::vector<Eigen::Vector2d>& p) {
  const int n = static_cast<int>(p.size());
  if (n < 4) throw Error("degenerate polygon: fewer than 4 vertices");
  auto at = [&](int i) -> const Eigen::Vector2d& { return p[static_cast<std::size_t>((i % n + n) % n)]; };
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    h[static_cast<std::size_t>(i)] = (at(i + 1) - at(i)).norm();
    if (!(h[static_cast<std::size_t>(i)] > 0.0)) throw Error("degenerate polygon: repeated vertex");
  }
  auto hh = [&](int i) { return h[static_cast<std::size_t>((i % n + n) % n)]; };

  // Second derivatives at the vertices from the cyclic C2 conditions.
  Eigen::SparseMatrix<double> a(n, n);
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::MatrixX2d rhs(n, 2);
  for (int i = 0; i < n; ++i) {
    entries.emplace_back(i, (i + n - 1) % n, hh(i - 1));
    entries.emplace_back(i, i, 2.0 * (hh(i - 1) + hh(i)));
    entries.emplace_back(i, (i + 1) % n, hh(i));
    rhs.row(i) = (6.0 * ((at(i + 1) - at(i)) / hh(i) - (at(i) - at(i - 1)) / hh(i - 1))).transpose();
  }
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw Error("degenerate polygon: spline system is singular");
  const Eigen::MatrixX2d m = lu.solve(rhs);

  ClosedCurve curve;
  curve.segments.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double hi = hh(i);
    const Eigen::Vector2d mi = m.row(i).transpose(), mj = m.row(j).transpose();
    const Eigen::Vector2d slope = (at(j) - at(i)) / hi;
    const Eigen::Vector2d d0 = slope - hi * (2.0 * mi + mj) / 6.0;
    const Eigen::Vector2d d1 = slope + hi * (mi + 2.0 * mj) / 6.0;
    curve.segments.push_back({at(i), at(i) + hi * d0 / 3.0, at(j) - hi * d1 / 3.0, at(j)});
  }
  return curve;
}

ClosedCurve fit_closed_curve(const PointMatrix& x, const Polygon& boundary) {
  if (x.cols() != 2) throw Error("fit_closed_curve: points must be 2D");
  std::vector<Eigen::Vector2d> v;
  v.reserve(boundary.vertices.size());
  for (int i : boundary.vertices) v.emplace_back(x(i, 0), x(i, 1));
  return fit_closed_curve(v);
}

namespace {

double energy_at_order(const ClosedCurve& curve, int nodes, double scale) {
  const GaussRule& rule = gauss_legendre(nodes);
  double total = 0.0;
  for (std::size_t s = 0; s < curve.segments.size(); ++s) {
    double seg = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = 0.5 * (rule.nodes[k] + 1.0);
      const Eigen::Vector2d d1 = curve.first_derivative(s, t);
      const Eigen::Vector2d d2 = curve.second_derivative(s, t);
      const double speed = d1.norm();
      if (!(speed > 1e-12 * scale)) throw Error("singular parametrization");
      const double cross = d1.x() * d2.y() - d1.y() * d2.x();
      seg += rule.weights[k] * cross * cross / std::pow(speed, 5);
    }
    total += 0.5 * seg;
  }
  return total;
}

}  // namespace

double curve_bending_energy(const ClosedCurve& curve) {
  if (curve.segments.empty()) throw Error("curve_bending_energy: empty curve");
  double scale = 0.0;
  for (const auto& b : curve.segments) scale = std::max(scale, (b[3] - b[0]).norm());
  double prev = energy_at_order(curve, 32, scale);
  for (int nodes = 64; nodes <= 1024; nodes *= 2) {
    const double next = energy_at_order(curve, nodes, scale);
    if (std::abs(next - prev) <= 1e-3 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

}  // namespace decathlon
