#include "decathlon/datagen.hpp"

#include "decathlon/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace decathlon {

BlobSpec blob_template(int blobs, int per_blob, int dim, double spread, double separation,
                       std::uint64_t seed) {
  if (blobs < 1 || per_blob < 1 || dim < 1) throw Error("blob template needs positive blobs, count and dim");
  BlobSpec spec;
  spec.seed = seed;
  const double radius = blobs < 2 ? 0.0 : separation / (2.0 * std::sin(std::numbers::pi / blobs));
  for (int j = 0; j < blobs; ++j) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    if (dim == 1) {
      c(0) = separation * j;
    } else {
      const double angle = 2.0 * std::numbers::pi * j / blobs;
      c(0) = radius * std::cos(angle);
      c(1) = radius * std::sin(angle);
    }
    spec.centers.push_back(std::move(c));
    spec.counts.push_back(per_blob);
    spec.spreads.push_back(spread);
  }
  return spec;
}

Dataset make_blobs(const BlobSpec& spec) {
  if (spec.centers.empty()) throw Error("blob spec has no centers");
  if (spec.counts.size() != spec.centers.size() || spec.spreads.size() != spec.centers.size()) {
    throw Error("blob spec: centers, counts and spreads differ in length");
  }
  const Eigen::Index d = spec.centers.front().size();
  Eigen::Index n = 0;
  for (std::size_t b = 0; b < spec.centers.size(); ++b) {
    if (spec.centers[b].size() != d) throw Error("blob spec: dimension mismatch among centers");
    if (spec.counts[b] < 1) throw Error("blob spec: counts must be at least 1");
    if (!(spec.spreads[b] > 0.0)) throw Error("blob spec: spreads must be positive");
    n += spec.counts[b];
  }
  PointMatrix pts(n, d);
  std::vector<int> truth;
  truth.reserve(static_cast<std::size_t>(n));
  Rng rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Index row = 0;
  for (std::size_t b = 0; b < spec.centers.size(); ++b) {
    for (int i = 0; i < spec.counts[b]; ++i, ++row) {
      for (Eigen::Index k = 0; k < d; ++k) pts(row, k) = spec.centers[b](k) + spec.spreads[b] * gauss(rng);
      truth.push_back(static_cast<int>(b));
    }
  }
  return Dataset(std::move(pts), {}, std::move(truth));
}

Dataset make_rings(const std::vector<RingSpec>& specs) {
  if (specs.empty()) throw Error("no ring specs given");
  Eigen::Index n = 0;
  for (const auto& s : specs) {
    if (!(s.radius > 0.0)) throw Error("ring radius must be positive");
    if (s.count < 3) throw Error("ring needs at least 3 points");
    if (s.jitter_sigma < 0.0) throw Error("ring jitter must be nonnegative");
    n += s.count;
  }
  PointMatrix pts(n, 2);
  std::vector<int> truth;
  Eigen::Index row = 0;
  for (std::size_t r = 0; r < specs.size(); ++r) {
    const RingSpec& s = specs[r];
    Rng rng(s.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < s.count; ++j, ++row) {
      double angle = 2.0 * std::numbers::pi * j / s.count;
      if (s.jitter_sigma > 0.0) angle += s.jitter_sigma * gauss(rng);
      pts(row, 0) = s.center.x() + s.radius * std::cos(angle);
      pts(row, 1) = s.center.y() + s.radius * std::sin(angle);
      truth.push_back(static_cast<int>(r));
    }
  }
  return Dataset(std::move(pts), {}, std::move(truth));
}

NoiseBatch sample_noise(const Dataset& x, int q, std::uint64_t seed) {
  if (q < 1) throw Error("noise batch size must be at least 1");
  const Eigen::RowVectorXd lo = x.points().colwise().minCoeff();
  const Eigen::RowVectorXd hi = x.points().colwise().maxCoeff();
  if (((hi - lo).array() <= 0.0).all()) throw Error("degenerate bounding box: every coordinate has zero extent");
  NoiseBatch batch;
  batch.points.resize(q, x.dim());
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < q; ++i)
    for (Eigen::Index k = 0; k < x.dim(); ++k) {
      // Clamp guards against the half-open interval rounding up to hi.
      batch.points(i, k) = std::clamp(lo(k) + (hi(k) - lo(k)) * unit(rng), lo(k), hi(k));
    }
  return batch;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void cell_error(std::size_t row, std::size_t col, std::string_view cell, const char* what) {
  throw Error("CSV parse error at row " + std::to_string(row) + ", column " + std::to_string(col) + ": " + what +
              " '" + std::string(cell) + "'");
}

}  // namespace

Dataset read_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  std::vector<double> values;
  std::vector<int> truth;
  std::size_t width = 0;
  Eigen::Index n = 0;
  bool first_line = true;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = line;
    if (first_line && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    first_line = false;
    if (trim(view).empty()) continue;
    auto cells = split_row(view);
    if (options.header && header.empty()) {
      for (auto c : cells) header.emplace_back(trim(c));
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw Error("CSV parse error at row " + std::to_string(row) + ": expected " + std::to_string(width) +
                  " columns, found " + std::to_string(cells.size()));
    }
    const std::size_t features = options.truth_column ? width - 1 : width;
    for (std::size_t c = 0; c < width; ++c) {
      const std::string_view cell = trim(cells[c]);
      if (options.truth_column && c == features) {
        int label = 0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) cell_error(row, c + 1, cell, "non-integer label");
        truth.push_back(label);
      } else {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
          cell_error(row, c + 1, cell, "non-numeric cell");
        }
        if (!std::isfinite(v)) cell_error(row, c + 1, cell, "non-finite value");
        values.push_back(v);
      }
    }
    ++n;
  }
  if (n == 0) throw Error("CSV contains no data rows");
  const Eigen::Index d = static_cast<Eigen::Index>(options.truth_column ? width - 1 : width);
  if (d < 1) throw Error("CSV has no feature columns");
  PointMatrix pts = Eigen::Map<const PointMatrix>(values.data(), n, d);
  std::vector<std::string> names;
  if (!header.empty()) {
    if (header.size() != width) throw Error("CSV header width does not match data rows");
    names.assign(header.begin(), header.begin() + d);
  }
  std::optional<std::vector<int>> truth_opt;
  if (options.truth_column) truth_opt = std::move(truth);
  return Dataset(std::move(pts), std::move(names), std::move(truth_opt));
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open CSV file '" + path + "'");
  return read_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& x, bool with_header) {
  if (with_header) {
    for (std::size_t j = 0; j < x.feature_names().size(); ++j) out << (j ? "," : "") << x.feature_names()[j];
    if (x.truth()) out << ",truth";
    out << '\n';
  }
  char buf[32];
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index k = 0; k < x.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", x.points()(i, k));
      out << (k ? "," : "") << buf;
    }
    if (x.truth()) out << ',' << (*x.truth())[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

void save_csv(const std::string& path, const Dataset& x, bool with_header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV file '" + path + "'");
  write_csv(out, x, with_header);
}

}  // namespace decathlon
