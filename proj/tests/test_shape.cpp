#include "decathlon/shape.hpp"

#include "support.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace decathlon;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<Eigen::Vector2d> circle(int n, double r, Eigen::Vector2d center = Eigen::Vector2d::Zero()) {
  std::vector<Eigen::Vector2d> out;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * pi * i / n;
    out.push_back(center + r * Eigen::Vector2d(std::cos(t), std::sin(t)));
  }
  return out;
}

PointMatrix to_matrix(const std::vector<Eigen::Vector2d>& pts) {
  PointMatrix x(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return x;
}

// Bending energy of a closed polyline via turning angles: sum theta_i^2 / l_i
// with l_i the mean length of the two edges at vertex i.
double polyline_bending_energy(const std::vector<Eigen::Vector2d>& p) {
  const std::size_t n = p.size();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = p[i] - p[(i + n - 1) % n];
    const Eigen::Vector2d b = p[(i + 1) % n] - p[i];
    const double turn = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    e += turn * turn / (0.5 * (a.norm() + b.norm()));
  }
  return e;
}

// Cubic clamped uniform B-spline basis values at u, read back through the
// patch evaluator: a net whose x coordinate is 1 on row i and 0 elsewhere
// evaluates to N_i(u).
Eigen::MatrixXd basis_matrix(int n, const std::vector<double>& samples) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(samples.size()), n);
  for (int i = 0; i < n; ++i) {
    SurfacePatch p;
    p.net.assign(static_cast<std::size_t>(n), std::vector<Eigen::Vector3d>(static_cast<std::size_t>(n), Eigen::Vector3d::Zero()));
    for (auto& c : p.net[static_cast<std::size_t>(i)]) c.x() = 1.0;
    for (std::size_t s = 0; s < samples.size(); ++s) a(static_cast<Eigen::Index>(s), i) = evaluate_patch(p, samples[s], 0.5).s.x();
  }
  return a;
}

// Least-squares net for a parametrized surface f(u, v) on an n x n net.
template <class F>
SurfacePatch fit_patch(int n, F f) {
  std::vector<double> samples;
  const int m = 6 * n;
  for (int s = 0; s <= m; ++s) samples.push_back(static_cast<double>(s) / m);
  const Eigen::MatrixXd a = basis_matrix(n, samples);
  const Eigen::MatrixXd pinv = a.completeOrthogonalDecomposition().pseudoInverse();
  SurfacePatch patch;
  patch.net.assign(static_cast<std::size_t>(n), std::vector<Eigen::Vector3d>(static_cast<std::size_t>(n)));
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd grid(samples.size(), samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
      for (std::size_t j = 0; j < samples.size(); ++j)
        grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(samples[i], samples[j])[k];
    const Eigen::MatrixXd net = pinv * grid * pinv.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) patch.net[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][k] = net(i, j);
  }
  return patch;
}

// Six cube faces projected onto the unit sphere with the equal-angle map.
std::vector<SurfacePatch> sphere_patches(int n) {
  std::vector<SurfacePatch> out;
  for (int axis = 0; axis < 3; ++axis)
    for (double sign : {-1.0, 1.0}) {
      out.push_back(fit_patch(n, [&](double u, double v) {
        const double a = std::tan((u - 0.5) * pi / 2.0), b = std::tan((v - 0.5) * pi / 2.0);
        Eigen::Vector3d p;
        p[axis] = sign;
        p[(axis + 1) % 3] = sign * a;
        p[(axis + 2) % 3] = b;
        return Eigen::Vector3d(p.normalized());
      }));
    }
  return out;
}

}  // namespace

TEST_CASE("gauss-legendre rules") {
  for (int n : {1, 2, 5, 32, 64, 256}) {
    const GaussRule& g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    double sum = 0.0, moment = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += g.weights[static_cast<std::size_t>(i)];
      moment += g.weights[static_cast<std::size_t>(i)] * std::pow(g.nodes[static_cast<std::size_t>(i)], 2 * n - 2);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(moment == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
    CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
  }
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("circle bending energy") {
  CHECK(curve_bending_energy(fit_closed_curve(circle(512, 1.0))) == doctest::Approx(2.0 * pi).epsilon(0.01));
  CHECK(curve_bending_energy(fit_closed_curve(circle(512, 2.0))) == doctest::Approx(pi).epsilon(0.01));
  const double unit = curve_bending_energy(fit_closed_curve(circle(128, 1.0)));
  for (double s : {0.5, 2.0, 4.0})
    CHECK(curve_bending_energy(fit_closed_curve(circle(128, s))) == doctest::Approx(unit / s).epsilon(0.01));
}

TEST_CASE("bending energy follows the dilation law on random curves") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> wobble(0.0, 0.3), scale(0.25, 4.0);
  for (int t = 0; t < 1000; ++t) {
    const double a = wobble(rng), b = wobble(rng), s = scale(rng);
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 48; ++i) {
      const double th = 2.0 * pi * i / 48;
      const double r = 1.0 + a * std::cos(3 * th) + b * std::sin(2 * th);
      pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    const double e = curve_bending_energy(fit_closed_curve(pts));
    for (auto& p : pts) p *= s;
    CHECK(curve_bending_energy(fit_closed_curve(pts)) == doctest::Approx(e / s).epsilon(0.01));
  }
}

TEST_CASE("bending energy is invariant under rigid motion") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < 40; ++i) {
    const double th = 2.0 * pi * i / 40;
    const double r = 1.0 + 0.2 * std::cos(4 * th);
    pts.emplace_back(2.0 * r * std::cos(th), r * std::sin(th));
  }
  const double e = curve_bending_energy(fit_closed_curve(pts));
  for (int t = 0; t < 50; ++t) {
    const Eigen::Rotation2Dd rot(u(rng));
    const Eigen::Vector2d shift(u(rng), u(rng));
    std::vector<Eigen::Vector2d> moved;
    for (const auto& p : pts) moved.push_back(rot * p + shift);
    CHECK(curve_bending_energy(fit_closed_curve(moved)) == doctest::Approx(e).epsilon(1e-6));
  }
}

TEST_CASE("closed curve interpolation and continuity") {
  const std::vector<Eigen::Vector2d> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const ClosedCurve sq = fit_closed_curve(square);
  REQUIRE(sq.segments.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK((sq.position(i, 0.0) - square[i]).norm() <= 1e-12);

  const ClosedCurve c = fit_closed_curve(circle(64, 1.0));
  double worst = 0.0;
  for (std::size_t s = 0; s < c.segments.size(); ++s)
    for (int k = 0; k <= 100; ++k) worst = std::max(worst, std::abs(c.position(s, k / 100.0).norm() - 1.0));
  CHECK(worst < 1e-3);

  const ClosedCurve wild = fit_closed_curve(circle(9, 1.0));
  for (const ClosedCurve* curve : {&c, &wild, &sq}) {
    const std::size_t n = curve->segments.size();
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t next = (s + 1) % n;
      CHECK((curve->position(s, 1.0) - curve->position(next, 0.0)).norm() <= 1e-9);
      CHECK((curve->first_derivative(s, 1.0) - curve->first_derivative(next, 0.0)).norm() <= 1e-9);
      CHECK((curve->second_derivative(s, 1.0) - curve->second_derivative(next, 0.0)).norm() <= 1e-9);
    }
  }
  CHECK_THROWS_WITH_AS(fit_closed_curve(std::vector<Eigen::Vector2d>{{0, 0}, {1, 0}, {0, 1}}),
                       doctest::Contains("degenerate polygon"), Error);
  CHECK_THROWS_AS(fit_closed_curve(std::vector<Eigen::Vector2d>{{0, 0}, {1, 0}, {1, 0}, {0, 1}}), Error);
}

TEST_CASE("ellipse matches a dense polyline oracle") {
  auto ellipse = [](int n) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * pi * i / n;
      pts.emplace_back(2.0 * std::cos(t), std::sin(t));
    }
    return pts;
  };
  const double oracle = polyline_bending_energy(ellipse(100000));
  CHECK(curve_bending_energy(fit_closed_curve(ellipse(256))) == doctest::Approx(oracle).epsilon(0.02));
}

TEST_CASE("surface integrand on planes and graphs") {
  const SurfacePatch flat = fit_patch(5, [](double u, double v) { return Eigen::Vector3d(u, 2.0 * v, 0.5 * u - v + 3.0); });
  for (double u : {0.0, 0.3, 0.77, 1.0})
    for (double v : {0.0, 0.5, 1.0}) CHECK(std::abs(surface_curvature_integrand(flat, u, v)) <= 1e-9);
  CHECK(surface_shape_integral(flat) <= 1e-9);

  // Quadratic graph z = f(x, y) is reproduced exactly by a bicubic net, so
  // the integrand must match the graph curvature formulas.
  const double a = 0.7, b = -0.4, c = 0.3;
  const SurfacePatch graph = fit_patch(6, [&](double u, double v) { return Eigen::Vector3d(u, v, a * u * u + b * u * v + c * v * v); });
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uv(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const double x = uv(rng), y = uv(rng);
    const double fx = 2 * a * x + b * y, fy = b * x + 2 * c * y, fxx = 2 * a, fxy = b, fyy = 2 * c;
    const double w = 1.0 + fx * fx + fy * fy;
    const double k = (fxx * fyy - fxy * fxy) / (w * w);
    const double h = ((1 + fx * fx) * fyy - 2 * fx * fy * fxy + (1 + fy * fy) * fxx) / (2.0 * std::pow(w, 1.5));
    CHECK(surface_curvature_integrand(graph, x, y) == doctest::Approx(2 * h * h - k).epsilon(1e-9));
  }
  CHECK_THROWS_AS(surface_curvature_integrand(graph, 1.5, 0.5), Error);
}

TEST_CASE("surface integrand is a sum of squares") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0), jitter(-0.3, 0.3);
  for (int t = 0; t < 100; ++t) {
    SurfacePatch p;
    p.net.assign(5, std::vector<Eigen::Vector3d>(6));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 6; ++j) p.net[i][j] = Eigen::Vector3d(i + jitter(rng), j + jitter(rng), 3.0 * jitter(rng));
    for (int s = 0; s < 20; ++s) CHECK(surface_curvature_integrand(p, u(rng), u(rng)) >= 0.0);
  }
}

TEST_CASE("sphere assembled from six patches") {
  const auto patches = sphere_patches(10);
  double total = 0.0;
  for (const auto& p : patches) {
    CHECK(surface_curvature_integrand(p, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-2));
    total += surface_shape_integral(p);
  }
  CHECK(total == doctest::Approx(4.0 * pi).epsilon(0.02));

  // The integral of squared curvature over area is scale invariant.
  SurfacePatch big = patches.front();
  for (auto& row : big.net)
    for (auto& q : row) q *= 2.0;
  CHECK(surface_shape_integral(big) == doctest::Approx(surface_shape_integral(patches.front())).epsilon(1e-6));
}

TEST_CASE("control net loader") {
  std::istringstream ok("i,j,x,y,z\n1,1,1,1,0\n0,0,0,0,0\n0,1,0,1,0\n1,0,1,0,0\n"
                        "2,0,2,0,0\n2,1,2,1,0\n3,0,3,0,0\n3,1,3,1,0\n0,2,0,2,0\n1,2,1,2,0\n2,2,2,2,0\n3,2,3,2,0\n"
                        "0,3,0,3,1\n1,3,1,3,1\n2,3,2,3,1\n3,3,3,3,1\n");
  const SurfacePatch p = read_control_net(ok);
  CHECK(p.rows() == 4);
  CHECK(p.cols() == 4);
  CHECK(p.net[2][3] == Eigen::Vector3d(2, 3, 1));
  std::istringstream gap("0,0,0,0,0\n0,1,0,1,0\n");
  CHECK_THROWS_AS(read_control_net(gap), Error);
  std::istringstream dup("0,0,0,0,0\n0,0,1,1,1\n");
  CHECK_THROWS_WITH_AS(read_control_net(dup), doctest::Contains("duplicate"), Error);
  std::istringstream bad("0,0,0,0\n");
  CHECK_THROWS_WITH_AS(read_control_net(bad), doctest::Contains("line 1"), Error);
  CHECK_THROWS_AS(load_control_net("/nonexistent/net.csv"), Error);
}

TEST_CASE("shape score of circle clusters") {
  const PointMatrix one = to_matrix(circle(512, 1.0));
  const FeatureScore single = shape_score(Dataset(one), Clustering(std::vector<int>(512, 0)));
  CHECK(single.raw == doctest::Approx(2.0 * pi).epsilon(0.01));
  CHECK(single.points == doctest::Approx(18.0 * pi).epsilon(0.02));

  auto both = circle(512, 1.0);
  for (const auto& p : circle(512, 1.0, {5.0, 0.0})) both.push_back(p);
  std::vector<int> labels(1024, 0);
  std::fill(labels.begin() + 512, labels.end(), 1);
  const Dataset two(to_matrix(both));
  const FeatureScore pair = shape_score(two, Clustering(labels), 2);
  CHECK(pair.raw == doctest::Approx(4.0 * pi).epsilon(0.01));
  CHECK(pair.points == doctest::Approx(72.0 * pi).epsilon(0.02));
  CHECK(shape_score(two, Clustering(labels), 1).points == shape_score(two, Clustering(labels), 4).points);

  // A collinear cluster is skipped and leaves beta at one cluster.
  auto with_line = circle(512, 1.0);
  for (int i = 0; i < 5; ++i) with_line.emplace_back(10.0 + i, 0.0);
  std::vector<int> l2(517, 0);
  std::fill(l2.begin() + 512, l2.end(), 1);
  const ShapeSummary s = shape_summary(Dataset(to_matrix(with_line)), Clustering(l2));
  CHECK(s.scored == 1);
  REQUIRE(s.skipped.size() == 1);
  CHECK(s.skipped[0].find("cluster 1") != std::string::npos);
  CHECK(std::isnan(s.per_cluster[1]));
  CHECK(s.beta == doctest::Approx(8.0 * pi));
}

TEST_CASE("star-shaped cluster bends more than a convex blob of equal area") {
  auto fill = [](auto radius) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 600; ++i) {
      const double t = 2.0 * pi * i / 600;
      pts.push_back(radius(t) * Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
    for (int ring = 1; ring < 8; ++ring)
      for (int i = 0; i < 40 * ring; ++i) {
        const double t = 2.0 * pi * i / (40 * ring);
        pts.push_back(radius(t) * ring / 8.0 * Eigen::Vector2d(std::cos(t), std::sin(t)));
      }
    return to_matrix(pts);
  };
  const PointMatrix star = fill([](double t) { return 1.0 + 0.3 * std::cos(5 * t); });
  const PointMatrix blob = fill([](double) { return std::sqrt(1.0 + 0.045); });
  const auto n_star = static_cast<std::size_t>(star.rows()), n_blob = static_cast<std::size_t>(blob.rows());
  const double e_star = shape_summary(Dataset(star), Clustering(std::vector<int>(n_star, 0))).total;
  const double e_blob = shape_summary(Dataset(blob), Clustering(std::vector<int>(n_blob, 0))).total;
  CHECK(e_star > e_blob);
  CHECK(e_blob == doctest::Approx(2.0 * pi / std::sqrt(1.045)).epsilon(0.02));
}
