#include "decathlon/shape.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace decathlon {

namespace {

constexpr int kDegree = 3;

// Clamped uniform knot vector for `count` control points.
std::vector<double> knots(int count) {
  const int spans = count - kDegree;
  std::vector<double> k;
  for (int i = 0; i <= kDegree; ++i) k.push_back(0.0);
  for (int i = 1; i < spans; ++i) k.push_back(static_cast<double>(i) / spans);
  for (int i = 0; i <= kDegree; ++i) k.push_back(1.0);
  return k;
}

int find_span(int count, double t, const std::vector<double>& k) {
  if (t >= k[static_cast<std::size_t>(count)]) return count - 1;
  const auto it = std::upper_bound(k.begin() + kDegree, k.begin() + count + 1, t);
  return static_cast<int>(it - k.begin()) - 1;
}

// Basis values and first two derivatives for the span containing t.
std::array<std::array<double, kDegree + 1>, 3> basis_derivatives(int span, double t, const std::vector<double>& k) {
  const int p = kDegree;
  double ndu[p + 1][p + 1];
  double left[p + 1], right[p + 1];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - k[static_cast<std::size_t>(span + 1 - j)];
    right[j] = k[static_cast<std::size_t>(span + j)] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  std::array<std::array<double, p + 1>, 3> ders{};
  for (int j = 0; j <= p; ++j) ders[0][static_cast<std::size_t>(j)] = ndu[j][p];
  double a[2][p + 1];
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int kk = 1; kk <= 2; ++kk) {
      double d = 0.0;
      const int rk = r - kk, pk = p - kk;
      if (r >= kk) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = r - 1 <= pk ? kk - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][kk] = -a[s1][kk - 1] / ndu[pk + 1][r];
        d += a[s2][kk] * ndu[r][pk];
      }
      ders[static_cast<std::size_t>(kk)][static_cast<std::size_t>(r)] = d;
      std::swap(s1, s2);
    }
  }
  for (auto& v : ders[1]) v *= p;
  for (auto& v : ders[2]) v *= p * (p - 1);
  return ders;
}

double fundamental_integrand(const SurfaceDerivatives& d) {
  const Eigen::Vector3d cross = d.su.cross(d.sv);
  const double area = cross.norm();
  if (!(area > 0.0)) throw Error("singular parametrization");
  const Eigen::Vector3d normal = cross / area;
  const double e = d.su.dot(d.su), f = d.su.dot(d.sv), g = d.sv.dot(d.sv);
  const double l = d.suu.dot(normal), m = d.suv.dot(normal), n = d.svv.dot(normal);
  const double det = e * g - f * f;
  const double gauss = (l * n - m * m) / det;
  const double mean = (e * n - 2.0 * f * m + g * l) / (2.0 * det);
  return std::max(0.0, 2.0 * mean * mean - gauss);
}

}  // namespace

void validate_patch(const SurfacePatch& patch) {
  if (patch.rows() < 4 || patch.cols() < 4) throw Error("surface patch: control net must be at least 4 x 4");
  for (const auto& row : patch.net)
    if (static_cast<int>(row.size()) != patch.cols()) throw Error("surface patch: control net is not rectangular");
}

SurfaceDerivatives evaluate_patch(const SurfacePatch& patch, double u, double v) {
  validate_patch(patch);
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw Error("surface patch: parameters outside [0, 1]^2");
  const auto ku = knots(patch.rows()), kv = knots(patch.cols());
  const int su = find_span(patch.rows(), u, ku), sv = find_span(patch.cols(), v, kv);
  const auto bu = basis_derivatives(su, u, ku), bv = basis_derivatives(sv, v, kv);
  SurfaceDerivatives out;
  out.s = out.su = out.sv = out.suu = out.suv = out.svv = Eigen::Vector3d::Zero();
  for (int i = 0; i <= kDegree; ++i)
    for (int j = 0; j <= kDegree; ++j) {
      const Eigen::Vector3d& p =
          patch.net[static_cast<std::size_t>(su - kDegree + i)][static_cast<std::size_t>(sv - kDegree + j)];
      const auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
      out.s += bu[0][ii] * bv[0][jj] * p;
      out.su += bu[1][ii] * bv[0][jj] * p;
      out.sv += bu[0][ii] * bv[1][jj] * p;
      out.suu += bu[2][ii] * bv[0][jj] * p;
      out.suv += bu[1][ii] * bv[1][jj] * p;
      out.svv += bu[0][ii] * bv[2][jj] * p;
    }
  return out;
}

double surface_curvature_integrand(const SurfacePatch& patch, double u, double v) {
  return fundamental_integrand(evaluate_patch(patch, u, v));
}

namespace {

double integral_at_order(const SurfacePatch& patch, int nodes) {
  const GaussRule& rule = gauss_legendre(nodes);
  const auto ku = knots(patch.rows()), kv = knots(patch.cols());
  double total = 0.0;
  for (int a = kDegree; a < patch.rows(); ++a) {
    const double u0 = ku[static_cast<std::size_t>(a)], u1 = ku[static_cast<std::size_t>(a + 1)];
    for (int b = kDegree; b < patch.cols(); ++b) {
      const double v0 = kv[static_cast<std::size_t>(b)], v1 = kv[static_cast<std::size_t>(b + 1)];
      double cell = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = u0 + 0.5 * (rule.nodes[i] + 1.0) * (u1 - u0);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double v = v0 + 0.5 * (rule.nodes[j] + 1.0) * (v1 - v0);
          const SurfaceDerivatives d = evaluate_patch(patch, u, v);
          cell += rule.weights[i] * rule.weights[j] * fundamental_integrand(d) * d.su.cross(d.sv).norm();
        }
      }
      total += 0.25 * (u1 - u0) * (v1 - v0) * cell;
    }
  }
  return total;
}

}  // namespace

double surface_shape_integral(const SurfacePatch& patch) {
  validate_patch(patch);
  double prev = integral_at_order(patch, 32);
  for (int nodes = 64; nodes <= 256; nodes *= 2) {
    const double next = integral_at_order(patch, nodes);
    if (std::abs(next - prev) <= 1e-3 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

SurfacePatch read_control_net(std::istream& in) {
  std::map<std::pair<int, int>, Eigen::Vector3d> cells;
  std::string line;
  int line_no = 0, max_i = -1, max_j = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    int i = 0, j = 0;
    double x = 0, y = 0, z = 0;
    std::string rest;
    if (!(fields >> i >> j >> x >> y >> z) || (fields >> rest)) {
      const bool header = line_no == 1 && std::any_of(line.begin(), line.end(), [](unsigned char ch) { return std::isalpha(ch); });
      if (header) continue;
      throw Error("control net parse error at line " + std::to_string(line_no));
    }
    if (i < 0 || j < 0) throw Error("control net: negative index at line " + std::to_string(line_no));
    if (!cells.emplace(std::pair{i, j}, Eigen::Vector3d(x, y, z)).second)
      throw Error("control net: duplicate entry at line " + std::to_string(line_no));
    max_i = std::max(max_i, i);
    max_j = std::max(max_j, j);
  }
  SurfacePatch patch;
  patch.net.assign(static_cast<std::size_t>(max_i + 1), std::vector<Eigen::Vector3d>(static_cast<std::size_t>(max_j + 1)));
  if (cells.size() != static_cast<std::size_t>((max_i + 1) * (max_j + 1)))
    throw Error("control net: grid is incomplete");
  for (const auto& [key, p] : cells)
    patch.net[static_cast<std::size_t>(key.first)][static_cast<std::size_t>(key.second)] = p;
  validate_patch(patch);
  return patch;
}

SurfacePatch load_control_net(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open control net file: " + path);
  return read_control_net(in);
}

}  // namespace decathlon
