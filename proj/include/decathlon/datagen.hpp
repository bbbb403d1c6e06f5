#pragma once

#include "decathlon/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace decathlon {

struct BlobSpec {
  std::vector<Eigen::VectorXd> centers;
  std::vector<int> counts;
  std::vector<double> spreads;  // isotropic standard deviation per blob
  std::uint64_t seed = 0;
};

/// Evenly spaced centers on a circle in the first two coordinates (a line
/// for d = 1) with adjacent blobs `separation` apart.
BlobSpec blob_template(int blobs, int per_blob, int dim, double spread, double separation,
                       std::uint64_t seed);

/// Gaussian blobs; truth label = blob index. Bit-deterministic per seed.
Dataset make_blobs(const BlobSpec& spec);

struct RingSpec {
  double radius = 1.0;
  int count = 3;
  /// Angular jitter standard deviation in radians; 0 gives even spacing.
  double jitter_sigma = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  std::uint64_t seed = 0;
};

/// Points at angles 2*pi*j/count (+ optional Gaussian angular jitter) on each
/// ring; truth label = ring index.
Dataset make_rings(const std::vector<RingSpec>& specs);

struct NoiseBatch {
  PointMatrix points;
  int q() const { return static_cast<int>(points.rows()); }
};

/// q points uniform over the axis-aligned bounding box of x. Coordinates of
/// zero extent are held at their single value.
NoiseBatch sample_noise(const Dataset& x, int q, std::uint64_t seed);

struct CsvOptions {
  bool header = false;
  bool truth_column = false;  // last column is an integer truth label
};

Dataset read_csv(std::istream& in, const CsvOptions& options = {});
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Writes a header row (feature names, then "truth" when present) and one row
/// per point, coordinates printed with 17 significant digits.
void write_csv(std::ostream& out, const Dataset& x, bool with_header = true);
void save_csv(const std::string& path, const Dataset& x, bool with_header = true);

}  // namespace decathlon
