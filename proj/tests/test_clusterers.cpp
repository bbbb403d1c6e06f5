#include "decathlon/clusterers.hpp"
#include "decathlon/datagen.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace decathlon;

namespace {

// Naive agglomerative single linkage: repeatedly merge the closest pair of
// groups until k remain.
std::vector<int> naive_single_linkage(const PointMatrix& x, int k) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> group(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) group[static_cast<std::size_t>(i)] = i;
  for (int groups = n; groups > k; --groups) {
    double best = std::numeric_limits<double>::infinity();
    int ga = -1, gb = -1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (group[static_cast<std::size_t>(i)] == group[static_cast<std::size_t>(j)]) continue;
        const double d = (x.row(i) - x.row(j)).norm();
        if (d < best) {
          best = d;
          ga = group[static_cast<std::size_t>(i)];
          gb = group[static_cast<std::size_t>(j)];
        }
      }
    for (auto& g : group)
      if (g == gb) g = ga;
  }
  return group;
}

}  // namespace

TEST_CASE("parse clusterer specs") {
  const auto k = parse_clusterer("kmeans:k=3,iter=50", 9);
  const auto& km = std::get<clusterer::KMeans>(k.kind);
  CHECK(km.k == 3);
  CHECK(km.max_iter == 50);
  CHECK(km.seed == 9);
  CHECK(k.name == "kmeans:k=3,iter=50");
  CHECK(std::get<clusterer::Dbscan>(parse_clusterer("dbscan:eps=0.5,min_pts=4").kind).min_pts == 4);
  CHECK(std::get<clusterer::External>(parse_clusterer("external:\"cat x\"").kind).command == "cat x");
  CHECK_NOTHROW(std::get<clusterer::TruthOracle>(parse_clusterer("truth").kind));
  CHECK_THROWS_AS(parse_clusterer("kmeans:q=3"), Error);
  CHECK_THROWS_AS(parse_clusterer("kmeans"), Error);
  CHECK_THROWS_AS(parse_clusterer("spectral:k=2"), Error);
  CHECK_THROWS_AS(parse_clusterer("dbscan:eps=abc"), Error);
}

TEST_CASE("kmeans recovers separated blobs deterministically") {
  const Dataset x = make_blobs(blob_template(3, 100, 2, 0.5, 20.0, 4));
  const Clustering truth = Clustering::from_raw(*x.truth());
  const clusterer::KMeans p{3, 300, 12};
  const Clustering a = run_kmeans(p, x);
  CHECK(moved_fraction(truth, a) == 0.0);
  CHECK(run_kmeans(p, x).labels() == a.labels());
  CHECK_THROWS_AS(run_kmeans({500, 300, 1}, x), Error);
}

TEST_CASE("kmeans never leaves a cluster empty") {
  PointMatrix p(6, 1);
  p << 0, 0, 0, 0, 1, 1;
  const Clustering c = run_kmeans({3, 100, 1}, Dataset(p));
  CHECK(c.num_clusters() == 3);
}

TEST_CASE("single linkage matches naive agglomeration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const PointMatrix p = testing::random_points(rng, 25, 2);
    const int k = 1 + trial % 5;
    const Clustering fast = run_single_linkage({k}, Dataset(p));
    const Clustering slow = Clustering::from_raw(naive_single_linkage(p, k));
    CHECK(fast.num_clusters() == k);
    CHECK(moved_fraction(slow, fast) == 0.0);
  }
}

TEST_CASE("single linkage heights are sorted MST weights") {
  PointMatrix p(4, 1);
  p << 0, 1, 3, 6;
  const auto h = single_linkage_heights(Dataset(p));
  CHECK(h == std::vector<double>{1, 2, 3});
}

TEST_CASE("dbscan cores, borders and noise") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const PointMatrix p = testing::random_points(rng, 60, 2);
    const double eps = 0.15 + 0.01 * trial;
    const int min_pts = 4;
    const Clustering c = run_dbscan({eps, min_pts}, Dataset(p));
    const int n = static_cast<int>(p.rows());
    auto near = [&](int i, int j) { return (p.row(i) - p.row(j)).norm() <= eps; };
    std::vector<char> core(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      int count = 0;
      for (int j = 0; j < n; ++j) count += near(i, j);
      core[static_cast<std::size_t>(i)] = count >= min_pts;
    }
    // Core components by flood fill.
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int comps = 0;
    for (int s = 0; s < n; ++s) {
      if (!core[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] >= 0) continue;
      std::vector<int> stack{s};
      comp[static_cast<std::size_t>(s)] = comps;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < n; ++w)
          if (core[static_cast<std::size_t>(w)] && comp[static_cast<std::size_t>(w)] < 0 && near(v, w)) {
            comp[static_cast<std::size_t>(w)] = comps;
            stack.push_back(w);
          }
      }
      ++comps;
    }
    CHECK(c.num_clusters() == comps);
    std::vector<int> core_only(static_cast<std::size_t>(n), -1), core_labels(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i)
      if (core[static_cast<std::size_t>(i)]) {
        core_only[static_cast<std::size_t>(i)] = comp[static_cast<std::size_t>(i)];
        core_labels[static_cast<std::size_t>(i)] = c.label(static_cast<std::size_t>(i));
      }
    if (comps > 0)
      CHECK(moved_fraction(Clustering::from_raw(core_only), Clustering::from_raw(core_labels)) == 0.0);
    for (int i = 0; i < n; ++i) {
      if (core[static_cast<std::size_t>(i)]) continue;
      std::set<int> reachable;
      for (int j = 0; j < n; ++j)
        if (core[static_cast<std::size_t>(j)] && near(i, j)) reachable.insert(c.label(static_cast<std::size_t>(j)));
      if (reachable.empty())
        CHECK(c.label(static_cast<std::size_t>(i)) == kNoise);
      else
        CHECK(reachable.count(c.label(static_cast<std::size_t>(i))) == 1);
    }
  }
}

TEST_CASE("truth oracle") {
  PointMatrix p(4, 1);
  p << 0, 1, 10, 9.2;
  const Dataset x(p, {}, std::vector<int>{4, 4, 7, -1});
  CHECK(run_truth_oracle(x).labels() == std::vector<int>{0, 0, 1, 1});
  CHECK_THROWS_AS(run_truth_oracle(Dataset(p)), Error);
}

TEST_CASE("external clusterer protocol") {
  PointMatrix p(3, 2);
  p << -1, 0, 2, 0, 3, 1;
  const Dataset x(p);
  const Clustering c = run_external("awk -F, '{ print ($1 > 0) ? 7 : -1 }'", x);
  CHECK(c.labels() == std::vector<int>{-1, 0, 0});
  CHECK_THROWS_WITH_AS(run_external("echo 1", x), doctest::Contains("expected 3 labels, got 1"), Error);
  CHECK_THROWS_WITH_AS(run_external("printf '0\\nx\\n1\\n'", x), doctest::Contains("line 2"), Error);
  CHECK_THROWS_WITH_AS(run_external("cat > /dev/null; exit 3", x), doctest::Contains("3"), Error);
}

TEST_CASE("work counter tallies distance evaluations") {
  const Dataset x = make_blobs(blob_template(2, 20, 2, 1.0, 10.0, 1));
  work::reset();
  (void)run_single_linkage({2}, x);
  CHECK(work::count() == 40u * 40u);
  work::reset();
  (void)run_dbscan({0.5, 3}, x);
  CHECK(work::count() >= 40u * 40u);
}
