#include "decathlon/clusterers.hpp"

#include "decathlon/geometry.hpp"
#include "decathlon/rng.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

namespace decathlon {

namespace work {
namespace {
thread_local std::uint64_t tally = 0;
}
void add(std::uint64_t units) { tally += units; }
std::uint64_t count() { return tally; }
void reset() { tally = 0; }
}  // namespace work

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("invalid value '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view body) {
  std::map<std::string, std::string, std::less<>> out;
  while (!body.empty()) {
    const std::size_t comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw Error("expected key=value in clusterer parameters, got '" + std::string(item) + "'");
    out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

std::string take(std::map<std::string, std::string, std::less<>>& params, std::string_view key) {
  auto it = params.find(key);
  if (it == params.end()) return {};
  std::string v = it->second;
  params.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, std::string, std::less<>>& params, std::string_view kind) {
  if (!params.empty()) throw Error("unknown parameter '" + params.begin()->first + "' for " + std::string(kind));
}

double sq_dist(const PointMatrix& x, Eigen::Index i, const Eigen::RowVectorXd& c) { return (x.row(i) - c).squaredNorm(); }

}  // namespace

ClustererSpec parse_clusterer(std::string_view text, std::uint64_t default_seed) {
  ClustererSpec spec;
  spec.name = std::string(text);
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  if (kind == "external") {
    std::string command(body);
    if (command.size() >= 2 && (command.front() == '"' || command.front() == '\'') && command.back() == command.front()) {
      command = command.substr(1, command.size() - 2);
    }
    if (command.empty()) throw Error("external clusterer needs a command");
    spec.kind = clusterer::External{command};
    return spec;
  }
  auto params = parse_params(body);
  if (kind == "kmeans") {
    clusterer::KMeans p;
    p.seed = default_seed;
    if (auto v = take(params, "k"); !v.empty()) p.k = parse_number<int>(v, "kmeans k");
    else throw Error("kmeans needs k");
    if (auto v = take(params, "iter"); !v.empty()) p.max_iter = parse_number<int>(v, "kmeans iter");
    if (auto v = take(params, "seed"); !v.empty()) p.seed = parse_number<std::uint64_t>(v, "kmeans seed");
    reject_leftovers(params, kind);
    spec.kind = p;
  } else if (kind == "dbscan") {
    clusterer::Dbscan p;
    if (auto v = take(params, "eps"); !v.empty()) p.eps = parse_number<double>(v, "dbscan eps");
    else throw Error("dbscan needs eps");
    if (auto v = take(params, "min_pts"); !v.empty()) p.min_pts = parse_number<int>(v, "dbscan min_pts");
    reject_leftovers(params, kind);
    spec.kind = p;
  } else if (kind == "single_linkage") {
    clusterer::SingleLinkage p;
    if (auto v = take(params, "k"); !v.empty()) p.k = parse_number<int>(v, "single_linkage k");
    else throw Error("single_linkage needs k");
    reject_leftovers(params, kind);
    spec.kind = p;
  } else if (kind == "truth" || kind == "truth_oracle") {
    reject_leftovers(params, kind);
    spec.kind = clusterer::TruthOracle{};
  } else {
    throw Error("unknown clusterer '" + std::string(kind) + "'");
  }
  return spec;
}

Clustering run(const ClustererSpec& spec, const Dataset& x) {
  return std::visit(
      [&](const auto& p) -> Clustering {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, clusterer::KMeans>) return run_kmeans(p, x);
        else if constexpr (std::is_same_v<T, clusterer::Dbscan>) return run_dbscan(p, x);
        else if constexpr (std::is_same_v<T, clusterer::SingleLinkage>) return run_single_linkage(p, x);
        else if constexpr (std::is_same_v<T, clusterer::External>) return run_external(p.command, x);
        else if constexpr (std::is_same_v<T, clusterer::TruthOracle>) return run_truth_oracle(x);
        else {
          if (!p.fn) throw Error("custom clusterer has no function");
          Clustering c = p.fn(x);
          if (c.size() != static_cast<std::size_t>(x.size())) throw Error("custom clusterer returned wrong label count");
          return c;
        }
      },
      spec.kind);
}

// ---------------------------------------------------------------------------
// k-means

Clustering run_kmeans(const clusterer::KMeans& params, const Dataset& x) {
  const PointMatrix& pts = x.points();
  const Eigen::Index n = x.size();
  const int k = params.k;
  if (k < 1) throw Error("kmeans: k must be at least 1");
  if (k > n) throw Error("kmeans: k = " + std::to_string(k) + " exceeds N = " + std::to_string(n));
  if (params.max_iter < 1) throw Error("kmeans: max_iter must be at least 1");

  Rng rng(derive_seed(params.seed, Stream::clusterer));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // k-means++ seeding.
  PointMatrix centers(k, x.dim());
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  Eigen::Index first = std::min<Eigen::Index>(static_cast<Eigen::Index>(unit(rng) * static_cast<double>(n)), n - 1);
  centers.row(0) = pts.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], sq_dist(pts, i, centers.row(c - 1)));
      total += d2[static_cast<std::size_t>(i)];
    }
    work::add(static_cast<std::uint64_t>(n));
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::min<Eigen::Index>(static_cast<Eigen::Index>(unit(rng) * static_cast<double>(n)), n - 1);
    }
    centers.row(c) = pts.row(pick);
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < params.max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(pts, i, centers.row(0));
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(pts, i, centers.row(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    work::add(static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k));

    PointMatrix sums = PointMatrix::Zero(k, x.dim());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += pts.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
        continue;
      }
      // Empty cluster: reseed from the point farthest from its own centroid.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int a = assign[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(a)] <= 1) continue;
        const double d = sq_dist(pts, i, centers.row(a));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(far)])];
      assign[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      centers.row(c) = pts.row(far);
      changed = true;
    }
    if (!changed) break;
  }
  return Clustering::from_raw(assign);
}

// ---------------------------------------------------------------------------
// DBSCAN

Clustering run_dbscan(const clusterer::Dbscan& params, const Dataset& x) {
  if (!(params.eps > 0.0)) throw Error("dbscan: eps must be positive");
  if (params.min_pts < 1) throw Error("dbscan: min_pts must be at least 1");
  const PointMatrix& pts = x.points();
  const Eigen::Index n = x.size();
  const double eps2 = params.eps * params.eps;
  constexpr int kUnvisited = -2;

  auto neighbours = [&](Eigen::Index i) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index j = 0; j < n; ++j)
      if ((pts.row(i) - pts.row(j)).squaredNorm() <= eps2) out.push_back(j);
    work::add(static_cast<std::uint64_t>(n));
    return out;
  };

  std::vector<int> label(static_cast<std::size_t>(n), kUnvisited);
  int cluster = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (label[static_cast<std::size_t>(i)] != kUnvisited) continue;
    auto seeds = neighbours(i);
    if (static_cast<int>(seeds.size()) < params.min_pts) {
      label[static_cast<std::size_t>(i)] = kNoise;
      continue;
    }
    label[static_cast<std::size_t>(i)] = cluster;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const Eigen::Index q = seeds[s];
      int& lq = label[static_cast<std::size_t>(q)];
      if (lq == kNoise) lq = cluster;  // border point
      if (lq != kUnvisited) continue;
      lq = cluster;
      auto more = neighbours(q);
      if (static_cast<int>(more.size()) >= params.min_pts) seeds.insert(seeds.end(), more.begin(), more.end());
    }
    ++cluster;
  }
  return Clustering(std::move(label));
}

// ---------------------------------------------------------------------------
// Single linkage

Clustering run_single_linkage(const clusterer::SingleLinkage& params, const Dataset& x) {
  const Eigen::Index n = x.size();
  if (params.k < 1) throw Error("single_linkage: k must be at least 1");
  if (params.k > n) throw Error("single_linkage: k = " + std::to_string(params.k) + " exceeds N = " + std::to_string(n));
  Tree tree = euclidean_mst(x.points());
  work::add(static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n));

  // Cut the k-1 heaviest edges under the (weight, u, v) order.
  auto& edges = tree.edges;
  std::sort(edges.begin(), edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
    return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
  });
  edges.resize(edges.size() - static_cast<std::size_t>(params.k - 1));

  std::vector<int> root(static_cast<std::size_t>(n));
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int v) {
    while (root[static_cast<std::size_t>(v)] != v) v = root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])];
    return v;
  };
  for (const auto& e : edges) root[static_cast<std::size_t>(find(e.u))] = find(e.v);

  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::map<int, int> component;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    auto [it, fresh] = component.emplace(r, static_cast<int>(component.size()));
    label[static_cast<std::size_t>(i)] = it->second;
  }
  return Clustering(std::move(label));
}

std::vector<double> single_linkage_heights(const Dataset& x) {
  const Tree tree = euclidean_mst(x.points());
  std::vector<double> h;
  for (const auto& e : tree.edges) h.push_back(e.weight);
  std::sort(h.begin(), h.end());
  return h;
}

// ---------------------------------------------------------------------------
// Truth oracle

Clustering run_truth_oracle(const Dataset& x) {
  if (!x.truth()) throw Error("truth oracle: dataset has no ground-truth labels");
  const Clustering truth = Clustering::from_raw(*x.truth());
  const int m = truth.num_clusters();
  if (m < 1) throw Error("truth oracle: ground truth has no clusters");
  PointMatrix centroids = PointMatrix::Zero(m, x.dim());
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const int l = truth.label(static_cast<std::size_t>(i));
    if (l < 0) continue;
    centroids.row(l) += x.point(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  for (int c = 0; c < m; ++c) centroids.row(c) /= counts[static_cast<std::size_t>(c)];

  std::vector<int> labels = truth.labels();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (labels[static_cast<std::size_t>(i)] >= 0) continue;
    int best = 0;
    double best_d = sq_dist(x.points(), i, centroids.row(0));
    for (int c = 1; c < m; ++c) {
      const double d = sq_dist(x.points(), i, centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return Clustering(std::move(labels));
}

// ---------------------------------------------------------------------------
// External process

namespace {

class TempFile {
 public:
  TempFile() {
    std::string pattern = (std::filesystem::temp_directory_path() / "decathlon-XXXXXX").string();
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw Error("cannot create temporary file for external clusterer");
    ::close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

Clustering run_external(const std::string& command, const Dataset& x) {
  TempFile input;
  {
    std::ofstream out(input.path(), std::ios::binary);
    char buf[32];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      for (Eigen::Index k = 0; k < x.dim(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", x.points()(i, k));
        out << (k ? "," : "") << buf;
      }
      out << '\n';
    }
    if (!out) throw Error("cannot write input for external clusterer");
  }

  const std::string full = "(" + command + ") < " + shell_quote(input.path());
  std::FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) throw Error("cannot start external clusterer '" + command + "'");
  std::string output;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    throw Error("external clusterer '" + command + "' failed with exit code " + std::to_string(code));
  }

  std::vector<std::string_view> lines;
  std::string_view rest = output;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t\r") == std::string_view::npos) lines.pop_back();
  if (lines.size() != static_cast<std::size_t>(x.size())) {
    throw Error("external clusterer '" + command + "': expected " + std::to_string(x.size()) + " labels, got " +
                std::to_string(lines.size()));
  }
  std::vector<int> labels;
  labels.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) line.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (line.empty() || ec != std::errc() || ptr != line.data() + line.size()) {
      throw Error("external clusterer '" + command + "': line " + std::to_string(i + 1) + " is not an integer label: '" +
                  std::string(line) + "'");
    }
    labels.push_back(v);
  }
  return Clustering::from_raw(labels);
}

}  // namespace decathlon
