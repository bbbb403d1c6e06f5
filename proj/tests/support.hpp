#pragma once

#include "decathlon/core.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testing {

inline decathlon::PointMatrix random_points(std::mt19937_64& rng, int n, int d, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  decathlon::PointMatrix x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = u(rng);
  return x;
}

inline std::vector<int> random_labels(std::mt19937_64& rng, int n, int m, double noise_rate = 0.0) {
  std::uniform_int_distribution<int> pick(0, m - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& l : out) l = u(rng) < noise_rate ? -1 : pick(rng);
  return out;
}

inline decathlon::PMF random_pmf(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  decathlon::PMF p(static_cast<std::size_t>(m));
  double s = 0.0;
  for (auto& v : p) s += (v = u(rng));
  for (auto& v : p) v /= s;
  // Renormalise the last entry so the sum is as close to 1 as rounding allows.
  double rest = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) rest += p[i];
  p.back() = 1.0 - rest;
  return p;
}

}  // namespace testing
