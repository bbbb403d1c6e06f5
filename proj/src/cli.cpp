#include "decathlon/cli.hpp"

#include "decathlon/datagen.hpp"
#include "decathlon/pipeline.hpp"
#include "decathlon/rng.hpp"
#include "decathlon/shape.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace decathlon {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Synthetic datasets

struct GeneratorSpec {
  std::string blobs;  // "MxN"
  std::string rings;  // "r:count,r:count"
  int dim = 2;
  double spread = 1.0;
  double separation = 10.0;
  double jitter = 0.0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep))
    if (!part.empty()) out.push_back(part);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error("invalid " + what + " '" + s + "'");
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != static_cast<int>(v)) throw Error("invalid " + what + " '" + s + "'");
  return static_cast<int>(v);
}

/// "blobs=3x200,dim=2,spread=1,separation=10" or "rings=1:100+2:100,jitter=0.1"
GeneratorSpec parse_generator(const std::string& text) {
  GeneratorSpec g;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("generator option '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "blobs")
      g.blobs = value;
    else if (key == "rings") {
      g.rings = value;
      std::replace(g.rings.begin(), g.rings.end(), '+', ',');
    } else if (key == "dim")
      g.dim = to_int(value, "dim");
    else if (key == "spread")
      g.spread = to_double(value, "spread");
    else if (key == "separation")
      g.separation = to_double(value, "separation");
    else if (key == "jitter")
      g.jitter = to_double(value, "jitter");
    else
      throw Error("unknown generator option '" + key + "'");
  }
  return g;
}

Dataset generate(const GeneratorSpec& g, std::uint64_t seed) {
  const std::uint64_t base = derive_seed(seed, Stream::generator);
  if (g.blobs.empty() == g.rings.empty()) throw Error("choose exactly one of blobs or rings");
  if (!g.blobs.empty()) {
    const auto x = g.blobs.find('x');
    if (x == std::string::npos) throw Error("blobs must look like MxN, e.g. 3x200");
    const int m = to_int(g.blobs.substr(0, x), "blob count");
    const int n = to_int(g.blobs.substr(x + 1), "blob size");
    if (m < 1 || n < 1 || g.dim < 1) throw Error("blob count, blob size and dim must be positive");
    return make_blobs(blob_template(m, n, g.dim, g.spread, g.separation, base));
  }
  if (g.dim != 2) throw Error("rings are 2D; drop --dim or set it to 2");
  std::vector<RingSpec> rings;
  for (const auto& item : split(g.rings, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error("ring '" + item + "' must look like radius:count");
    RingSpec r;
    r.radius = to_double(item.substr(0, colon), "ring radius");
    r.count = to_int(item.substr(colon + 1), "ring count");
    r.jitter_sigma = g.jitter;
    r.seed = derive_seed(base, Stream::generator, rings.size());
    rings.push_back(r);
  }
  return make_rings(rings);
}

// ---------------------------------------------------------------------------
// Dataset loading

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open data file: " + path);
  std::string first;
  std::getline(in, first);
  in.clear();
  in.seekg(0);
  while (!first.empty() && (first.back() == '\r' || first.back() == ' ')) first.pop_back();
  CsvOptions options;
  // A header is any first line that is not entirely numeric.
  bool numeric = !first.empty();
  for (const auto& field : split(first.substr(first.rfind("\xEF\xBB\xBF", 0) == 0 ? 3 : 0), ',')) {
    char* end = nullptr;
    std::strtod(field.c_str(), &end);
    numeric = numeric && end && *end == '\0';
  }
  options.header = !numeric;
  if (options.header) {
    const auto names = split(first, ',');
    options.truth_column = !names.empty() && names.back() == "truth";
  }
  return read_csv(in, options);
}

// ---------------------------------------------------------------------------
// Config file

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw Error("config file must hold a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(std::string("config file is not valid JSON: ") + e.what());
  }
}

template <typename T>
void fill(const json& cfg, const char* key, const CLI::Option* flag, T& target) {
  if (flag->count() > 0 || !cfg.contains(key)) return;
  try {
    target = cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(std::string("config key '") + key + "' has the wrong type");
  }
}

std::vector<std::string> list_value(const json& v, const char* key) {
  if (v.is_string()) return split(v.get<std::string>(), ',');
  if (v.is_array()) {
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw Error(std::string("config key '") + key + "' must list strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }
  throw Error(std::string("config key '") + key + "' must be a string or list");
}

// ---------------------------------------------------------------------------
// Output

void write_to(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("failed writing " + path);
}

constexpr const char* kScoreHelp = R"(Score clustering algorithms on the seven decathlon features.

Settings come from, in increasing precedence: built-in defaults, the JSON
file given by --config (keys mirror the long flag names: data, generate,
algo, features, ledger, seed, trials, format, out, parallel, clock, sizes,
reps, core-k), and flags on the command line.

The report goes to --out (or standard output); when --out is given the
best/worst/average table is printed to standard output, otherwise to the
error stream.)";

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"decathlon: empirical scoring of clustering algorithms", "decathlon"};
  app.require_subcommand(1);

  // generate
  GeneratorSpec gen;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic dataset with a truth column as CSV");
  auto* blobs_opt = generate_cmd->add_option("--blobs", gen.blobs, "Gaussian blobs as MxN (M blobs of N points)");
  auto* rings_opt = generate_cmd->add_option("--rings", gen.rings, "Rings as radius:count,radius:count,...");
  blobs_opt->excludes(rings_opt);
  generate_cmd->add_option("--dim", gen.dim, "Dimension for blobs")->capture_default_str();
  generate_cmd->add_option("--spread", gen.spread, "Blob standard deviation")->capture_default_str();
  generate_cmd->add_option("--separation", gen.separation, "Distance between adjacent blob centers")
      ->capture_default_str();
  generate_cmd->add_option("--jitter", gen.jitter, "Angular jitter of ring points (radians)")->capture_default_str();
  generate_cmd->add_option("--seed", gen_seed, "Master seed")->capture_default_str();
  generate_cmd->add_option("--out", gen_out, "Output CSV path (default: standard output)");

  // score
  std::string config_path, data_path, generate_text, features_text = "all", ledger_path, format_text = "json",
                                                      out_path, clock_text = "wall", sizes_text;
  std::vector<std::string> algos;
  std::uint64_t seed = 0;
  int trials = 0, parallel = 1, reps = 3, core_k = 5;
  auto* score_cmd = app.add_subcommand("score", kScoreHelp);
  score_cmd->add_option("--config", config_path, "JSON file with default settings");
  auto* data_opt = score_cmd->add_option("--data", data_path, "CSV dataset (header optional; last column 'truth' is used as ground truth)");
  auto* generate_opt = score_cmd->add_option("--generate", generate_text,
                                             "Synthetic dataset, e.g. blobs=3x200,dim=2 or rings=1:100+2:100");
  data_opt->excludes(generate_opt);
  auto* algo_opt = score_cmd->add_option("--algo", algos,
                                         "Clusterer (repeatable): kmeans:k=3, dbscan:eps=0.5,min_pts=5, "
                                         "single_linkage:k=3, truth, external:<command>");
  auto* features_opt = score_cmd->add_option("--features", features_text, "Comma-separated features or 'all'");
  auto* ledger_opt = score_cmd->add_option("--ledger", ledger_path, "JSON ledger overrides");
  auto* seed_opt = score_cmd->add_option("--seed", seed, "Master seed");
  auto* trials_opt = score_cmd->add_option("--trials", trials, "Trials for stability (minimum) and noise");
  auto* format_opt = score_cmd->add_option("--format", format_text, "Report format: text, csv or json");
  auto* out_opt = score_cmd->add_option("--out", out_path, "Report path (default: standard output)");
  auto* parallel_opt = score_cmd->add_option("--parallel", parallel, "Worker threads for trial-level work");
  auto* clock_opt = score_cmd->add_option("--clock", clock_text,
                                          "Complexity cost measure: wall (seconds) or work (distance evaluations, "
                                          "reproducible)");
  auto* sizes_opt = score_cmd->add_option("--sizes", sizes_text, "Complexity grid, e.g. 1000,2000,4000,8000,16000");
  auto* reps_opt = score_cmd->add_option("--reps", reps, "Timed repetitions per size");
  auto* core_k_opt = score_cmd->add_option("--core-k", core_k, "Neighbour rank for core distances");

  // table
  std::vector<std::string> report_paths;
  std::string table_format = "text", table_out;
  auto* table_cmd = app.add_subcommand("table", "Merge JSON reports into the best/worst/average table");
  table_cmd->add_option("reports", report_paths, "JSON report files")->required();
  table_cmd->add_option("--format", table_format, "text, csv or json")->capture_default_str();
  table_cmd->add_option("--out", table_out, "Output path (default: standard output)");

  // surface
  std::string net_path;
  auto* surface_cmd = app.add_subcommand("surface", "Curvature integral of a bicubic B-spline control net");
  surface_cmd->add_option("net", net_path, "CSV rows i,j,x,y,z")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "decathlon: " << msg << " (see --help)\n";
    return 1;
  }

  try {
    if (generate_cmd->parsed()) {
      if (gen.blobs.empty() && gen.rings.empty()) throw Error("generate needs --blobs or --rings");
      const Dataset x = generate(gen, gen_seed);
      std::ostringstream csv;
      write_csv(csv, x, true);
      write_to(gen_out, csv.str(), out);
      const int m = Clustering::from_raw(*x.truth()).num_clusters();
      (gen_out.empty() ? err : out) << "N=" << x.size() << " d=" << x.dim() << " m=" << m << '\n';
      return 0;
    }

    if (table_cmd->parsed()) {
      std::vector<AlgorithmReport> reports;
      for (const auto& path : report_paths) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open report file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
          for (auto& r : parse_reports(buf.str())) reports.push_back(std::move(r));
        } catch (const Error& e) {
          throw Error(path + ": " + e.what());
        }
      }
      std::ostringstream text;
      render(text, build_table(reports), parse_format(table_format));
      write_to(table_out, text.str(), out);
      return 0;
    }

    if (surface_cmd->parsed()) {
      const SurfacePatch patch = load_control_net(net_path);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g", surface_shape_integral(patch));
      out << "shape_integral " << buf << '\n';
      return 0;
    }

    // score
    json cfg = json::object();
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& [key, value] : cfg.items()) {
      static const std::set<std::string> known{"data", "generate", "algo", "features", "ledger", "seed", "trials",
                                               "format", "out", "parallel", "clock", "sizes", "reps", "core-k"};
      if (!known.count(key)) throw Error("unknown config key '" + key + "'");
    }
    if (data_opt->count() == 0 && generate_opt->count() == 0) {
      if (cfg.contains("data")) fill(cfg, "data", data_opt, data_path);
      if (cfg.contains("generate")) fill(cfg, "generate", generate_opt, generate_text);
    }
    if (algo_opt->count() == 0 && cfg.contains("algo")) algos = list_value(cfg["algo"], "algo");
    if (features_opt->count() == 0 && cfg.contains("features"))
      features_text = [&] {
        std::string joined;
        for (const auto& f : list_value(cfg["features"], "features")) joined += (joined.empty() ? "" : ",") + f;
        return joined;
      }();
    fill(cfg, "seed", seed_opt, seed);
    fill(cfg, "trials", trials_opt, trials);
    fill(cfg, "format", format_opt, format_text);
    fill(cfg, "out", out_opt, out_path);
    fill(cfg, "parallel", parallel_opt, parallel);
    fill(cfg, "clock", clock_opt, clock_text);
    fill(cfg, "reps", reps_opt, reps);
    fill(cfg, "core-k", core_k_opt, core_k);
    if (sizes_opt->count() == 0 && cfg.contains("sizes")) {
      const auto& s = cfg["sizes"];
      if (s.is_array()) {
        sizes_text.clear();
        for (const auto& v : s) sizes_text += (sizes_text.empty() ? "" : ",") + std::to_string(v.get<int>());
      } else {
        fill(cfg, "sizes", sizes_opt, sizes_text);
      }
    }

    ScoreConfig sc;
    sc.seed = seed;
    sc.threads = std::max(1, parallel);
    sc.core_k = core_k;
    if (trials > 0) sc.stability_trials = sc.noise_trials = trials;
    if (!ledger_path.empty() && ledger_opt->count() > 0) {
      sc.ledger.merge(Ledger::from_json_file(ledger_path));
    } else if (cfg.contains("ledger")) {
      const auto& l = cfg["ledger"];
      sc.ledger.merge(l.is_string() ? Ledger::from_json_file(l.get<std::string>()) : Ledger::from_json_text(l.dump()));
    }
    if (features_text != "all") {
      sc.features.clear();
      for (const auto& f : split(features_text, ',')) sc.features.insert(parse_feature(f));
      if (sc.features.empty()) throw Error("no feature enabled");
    }
    if (clock_text == "wall")
      sc.timing.clock = Clock::wall;
    else if (clock_text == "work")
      sc.timing.clock = Clock::work;
    else
      throw Error("unknown clock '" + clock_text + "' (expected wall or work)");
    if (!sizes_text.empty()) {
      sc.timing.sizes.clear();
      for (const auto& s : split(sizes_text, ',')) sc.timing.sizes.push_back(to_int(s, "size"));
    }
    sc.timing.reps = reps;
    const Format format = parse_format(format_text);

    if (data_path.empty() && generate_text.empty()) throw Error("score needs --data or --generate");
    const Dataset x = data_path.empty() ? generate(parse_generator(generate_text), seed) : load_dataset(data_path);
    if (algos.empty()) throw Error("score needs at least one --algo");
    std::vector<ClustererSpec> specs;
    for (std::size_t i = 0; i < algos.size(); ++i)
      specs.push_back(parse_clusterer(algos[i], derive_seed(seed, Stream::clusterer, i)));

    const auto reports = score_algorithms(x, specs, sc);
    std::ostringstream report_text;
    render(report_text, reports, format);
    write_to(out_path, report_text.str(), out);
    render(out_path.empty() ? err : out, build_table(reports), Format::text);

    int code = 0;
    for (const auto& r : reports)
      for (const auto& f : r.features)
        if (!f.score) {
          err << "decathlon: " << r.algorithm << ": " << to_string(f.feature) << " not scored: " << f.error << '\n';
          code = 2;
        }
    return code;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "decathlon: error: " << msg << '\n';
    return 1;
  }
}

}  // namespace decathlon
