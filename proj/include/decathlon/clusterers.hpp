#pragma once

#include "decathlon/core.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace decathlon {

namespace clusterer {

struct KMeans {
  int k = 2;
  int max_iter = 300;
  std::uint64_t seed = 0;
};

struct Dbscan {
  double eps = 0.5;
  int min_pts = 5;
};

struct SingleLinkage {
  int k = 2;
};

/// Shell command speaking the CSV-in / labels-out protocol.
struct External {
  std::string command;
};

/// Returns the dataset's ground-truth labels; rows without a truth label go
/// to the nearest true-cluster centroid.
struct TruthOracle {};

/// Any in-process callable, e.g. a test stub.
struct Custom {
  std::function<Clustering(const Dataset&)> fn;
};

}  // namespace clusterer

struct ClustererSpec {
  std::variant<clusterer::KMeans, clusterer::Dbscan, clusterer::SingleLinkage, clusterer::External,
               clusterer::TruthOracle, clusterer::Custom>
      kind;
  std::string name;
};

/// Parses "kmeans:k=3[,iter=100][,seed=7]", "dbscan:eps=0.5,min_pts=5",
/// "single_linkage:k=3", "external:<command>" and "truth". An unspecified
/// k-means seed takes `default_seed`.
ClustererSpec parse_clusterer(std::string_view text, std::uint64_t default_seed = 0);

/// Validates the spec against x and runs it.
Clustering run(const ClustererSpec& spec, const Dataset& x);

Clustering run_kmeans(const clusterer::KMeans& params, const Dataset& x);
Clustering run_dbscan(const clusterer::Dbscan& params, const Dataset& x);
Clustering run_single_linkage(const clusterer::SingleLinkage& params, const Dataset& x);
Clustering run_truth_oracle(const Dataset& x);

/// Streams x as header-less CSV (17 significant digits) to the command's
/// standard input and reads one integer label per line from its standard
/// output. Negative labels are noise.
Clustering run_external(const std::string& command, const Dataset& x);

/// Single-linkage merge heights in agglomeration order (N-1 values).
std::vector<double> single_linkage_heights(const Dataset& x);

/// Per-thread tally of elementary work (distance evaluations) performed by
/// the built-in clusterers. Custom clusterers may add to it themselves.
namespace work {
void add(std::uint64_t units);
std::uint64_t count();
void reset();
}  // namespace work

}  // namespace decathlon
