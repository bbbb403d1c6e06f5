#include "decathlon/scoring.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace decathlon {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

double round6(double v) { return std::isfinite(v) ? std::strtod(format_number(v).c_str(), nullptr) : v; }

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round6(v);
}

std::size_t feature_index(Feature f) {
  return static_cast<std::size_t>(std::find(kAllFeatures.begin(), kAllFeatures.end(), f) - kAllFeatures.begin());
}

std::string status_of(const FeatureResult& r) {
  if (!r.score) return "absent";
  return r.score->flag ? "flagged" : "ok";
}

}  // namespace

AlgorithmReport aggregate(std::string algorithm, std::vector<FeatureResult> results) {
  std::set<Feature> seen;
  for (const auto& r : results)
    if (!seen.insert(r.feature).second)
      throw Error("duplicate feature entry: " + std::string(to_string(r.feature)));
  std::sort(results.begin(), results.end(),
            [](const FeatureResult& a, const FeatureResult& b) { return feature_index(a.feature) < feature_index(b.feature); });
  AlgorithmReport report{std::move(algorithm), std::move(results), 0.0, true};
  for (const auto& r : report.features) {
    if (r.score)
      report.total += r.score->points;
    else
      report.comparable = false;
  }
  return report;
}

AlgorithmReport aggregate(std::string algorithm, const std::vector<FeatureScore>& scores) {
  std::vector<FeatureResult> results;
  for (const auto& s : scores) results.push_back({s.feature, s, {}});
  return aggregate(std::move(algorithm), std::move(results));
}

ScoreTable build_table(const std::vector<AlgorithmReport>& reports) {
  ScoreTable table;
  for (const auto& r : reports) table.algorithms.push_back(r.algorithm);
  for (Feature f : kAllFeatures) {
    TableRow row;
    row.feature = f;
    std::vector<std::pair<std::string, const FeatureScore*>> present;
    bool requested = false;
    for (const auto& r : reports) {
      const auto it = std::find_if(r.features.begin(), r.features.end(), [&](const auto& fr) { return fr.feature == f; });
      if (it == r.features.end()) continue;
      requested = true;
      if (it->score && !it->score->flag)
        present.emplace_back(r.algorithm, &*it->score);
      else
        ++table.warnings;
    }
    if (!requested) continue;
    row.reporting = static_cast<int>(present.size());
    if (!present.empty()) {
      std::sort(present.begin(), present.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      const LedgerEntry& first = present.front().second->entry;
      bool same = true;
      double sum = 0.0;
      std::size_t best = 0, worst = 0;
      for (std::size_t i = 0; i < present.size(); ++i) {
        const FeatureScore& s = *present[i].second;
        same = same && s.entry.alpha == first.alpha && s.entry.beta == first.beta && s.entry.weight == first.weight;
        sum += s.points;
        if (s.points > present[best].second->points) best = i;
        if (s.points < present[worst].second->points) worst = i;
      }
      if (same) {
        row.alpha = first.alpha;
        row.beta = first.beta;
        row.weight = first.weight;
      }
      row.best = present[best].first;
      row.worst = present[worst].first;
      row.best_points = present[best].second->points;
      row.worst_points = present[worst].second->points;
      row.average_points = sum / static_cast<double>(present.size());
    }
    table.rows.push_back(row);
  }
  return table;
}

Format parse_format(std::string_view name) {
  if (name == "text") return Format::text;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw Error("unknown format '" + std::string(name) + "' (expected text, csv or json)");
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : "n/a"; }
std::string cell(const std::optional<std::string>& v) { return v ? *v : "n/a"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void print_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

}  // namespace

void render(std::ostream& out, const ScoreTable& table, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json doc;
      doc["algorithms"] = table.algorithms;
      doc["rows"] = ordered_json::array();
      for (const auto& r : table.rows) {
        auto opt = [](const auto& v) -> ordered_json {
          if (!v) return nullptr;
          if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>)
            return number(*v);
          else
            return *v;
        };
        doc["rows"].push_back(ordered_json{{"feature", to_string(r.feature)},
                                           {"alpha", opt(r.alpha)},
                                           {"beta", opt(r.beta)},
                                           {"weight", opt(r.weight)},
                                           {"best", opt(r.best)},
                                           {"worst", opt(r.worst)},
                                           {"best_points", opt(r.best_points)},
                                           {"worst_points", opt(r.worst_points)},
                                           {"average_points", opt(r.average_points)}});
      }
      doc["warnings"] = table.warnings;
      out << doc.dump(2) << '\n';
      return;
    }
    case Format::csv: {
      out << "feature,alpha,beta,weight,best,worst,best_points,worst_points,average_points\n";
      for (const auto& r : table.rows) {
        out << to_string(r.feature) << ',' << cell(r.alpha) << ',' << cell(r.beta) << ',' << cell(r.weight) << ','
            << csv_field(cell(r.best)) << ',' << csv_field(cell(r.worst)) << ',' << cell(r.best_points) << ','
            << cell(r.worst_points) << ',' << cell(r.average_points) << '\n';
      }
      return;
    }
    case Format::text: {
      std::vector<std::vector<std::string>> rows{
          {"feature", "alpha", "beta", "w", "best", "worst", "best pts", "worst pts", "average"}};
      for (const auto& r : table.rows) {
        rows.push_back({std::string(to_string(r.feature)), cell(r.alpha), cell(r.beta), cell(r.weight), cell(r.best),
                        cell(r.worst), cell(r.best_points), cell(r.worst_points), cell(r.average_points)});
      }
      print_aligned(out, rows);
      if (table.warnings > 0) out << "warnings: " << table.warnings << " feature result(s) missing or flagged\n";
      return;
    }
  }
}

namespace {

ordered_json feature_json(const FeatureResult& r) {
  ordered_json j;
  j["name"] = to_string(r.feature);
  if (r.score) {
    const FeatureScore& s = *r.score;
    j["raw"] = number(s.raw);
    if (s.ci) {
      j["ci"] = ordered_json{{"mean", number(s.ci->mean)},
                             {"half_width", number(s.ci->half_width)},
                             {"n", s.ci->n_samples},
                             {"statistic", to_string(s.ci->statistic)}};
    } else {
      j["ci"] = nullptr;
    }
    j["alpha"] = number(s.entry.alpha);
    j["beta"] = number(s.entry.beta);
    j["weight"] = number(s.entry.weight);
    j["points"] = number(s.points);
  } else {
    for (const char* key : {"raw", "ci", "alpha", "beta", "weight", "points"}) j[key] = nullptr;
  }
  j["status"] = status_of(r);
  if (!r.score)
    j["message"] = r.error;
  else if (r.score->flag)
    j["message"] = *r.score->flag;
  return j;
}

}  // namespace

void render(std::ostream& out, const std::vector<AlgorithmReport>& reports, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json doc;
      doc["reports"] = ordered_json::array();
      for (const auto& r : reports) {
        ordered_json rj;
        rj["algorithm"] = r.algorithm;
        rj["features"] = ordered_json::array();
        for (const auto& f : r.features) rj["features"].push_back(feature_json(f));
        rj["total"] = number(r.total);
        rj["comparable"] = r.comparable;
        doc["reports"].push_back(rj);
      }
      out << doc.dump(2) << '\n';
      return;
    }
    case Format::csv: {
      out << "algorithm,feature,raw,ci_mean,ci_half_width,ci_n,ci_statistic,alpha,beta,weight,points,status,message\n";
      for (const auto& r : reports)
        for (const auto& f : r.features) {
          out << csv_field(r.algorithm) << ',' << to_string(f.feature) << ',';
          if (f.score) {
            const FeatureScore& s = *f.score;
            out << format_number(s.raw) << ',';
            if (s.ci)
              out << format_number(s.ci->mean) << ',' << format_number(s.ci->half_width) << ',' << s.ci->n_samples
                  << ',' << to_string(s.ci->statistic) << ',';
            else
              out << ",,,,";
            out << format_number(s.entry.alpha) << ',' << format_number(s.entry.beta) << ','
                << format_number(s.entry.weight) << ',' << format_number(s.points) << ',';
          } else {
            out << "n/a,,,,,n/a,n/a,n/a,n/a,";
          }
          const std::string message = f.score ? f.score->flag.value_or("") : f.error;
          out << status_of(f) << ',' << csv_field(message) << '\n';
        }
      return;
    }
    case Format::text: {
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        if (i) out << '\n';
        out << "algorithm: " << r.algorithm << "  total: " << format_number(r.total)
            << (r.comparable ? "" : "  (non-comparable: features missing)") << '\n';
        std::vector<std::vector<std::string>> rows{{"feature", "raw", "ci", "alpha", "beta", "w", "points", "status"}};
        for (const auto& f : r.features) {
          if (!f.score) {
            rows.push_back({std::string(to_string(f.feature)), "n/a", "n/a", "n/a", "n/a", "n/a", "n/a",
                            "absent: " + f.error});
            continue;
          }
          const FeatureScore& s = *f.score;
          const std::string ci = s.ci ? format_number(s.ci->mean) + " +- " + format_number(s.ci->half_width) : "-";
          rows.push_back({std::string(to_string(f.feature)), format_number(s.raw), ci, format_number(s.entry.alpha),
                          format_number(s.entry.beta), format_number(s.entry.weight), format_number(s.points),
                          s.flag ? "flagged: " + *s.flag : "ok"});
        }
        print_aligned(out, rows);
      }
      return;
    }
  }
}

namespace {

double get_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw Error(std::string("report schema: missing number '") + key + "'");
  return j[key].get<double>();
}

AlgorithmReport report_from_json(const nlohmann::json& rj) {
  if (!rj.is_object() || !rj.contains("algorithm") || !rj["algorithm"].is_string() || !rj.contains("features") ||
      !rj["features"].is_array())
    throw Error("report schema: expected {algorithm, features, total}");
  std::vector<FeatureResult> results;
  for (const auto& fj : rj["features"]) {
    if (!fj.is_object() || !fj.contains("name") || !fj["name"].is_string() || !fj.contains("status"))
      throw Error("report schema: feature entry needs name and status");
    const Feature f = parse_feature(fj["name"].get<std::string>());
    const std::string status = fj["status"].get<std::string>();
    const std::string message = fj.value("message", std::string());
    if (status == "absent") {
      results.push_back(FeatureResult::absent(f, message));
      continue;
    }
    if (status != "ok" && status != "flagged") throw Error("report schema: unknown status '" + status + "'");
    FeatureScore s;
    s.feature = f;
    s.raw = get_number(fj, "raw");
    s.entry = {f, get_number(fj, "alpha"), get_number(fj, "beta"), get_number(fj, "weight")};
    s.points = get_number(fj, "points");
    if (fj.contains("ci") && fj["ci"].is_object()) {
      const auto& cj = fj["ci"];
      ConfidenceInterval ci;
      ci.mean = get_number(cj, "mean");
      ci.half_width = get_number(cj, "half_width");
      ci.n_samples = static_cast<std::size_t>(get_number(cj, "n"));
      ci.statistic = cj.value("statistic", std::string("z")) == "t" ? Statistic::t : Statistic::z;
      s.ci = ci;
    }
    if (status == "flagged") s.flag = message;
    results.push_back({f, s, {}});
  }
  return aggregate(rj["algorithm"].get<std::string>(), std::move(results));
}

}  // namespace

std::vector<AlgorithmReport> parse_reports(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  std::vector<AlgorithmReport> out;
  if (doc.is_object() && doc.contains("reports")) {
    if (!doc["reports"].is_array()) throw Error("report schema: 'reports' must be an array");
    for (const auto& rj : doc["reports"]) out.push_back(report_from_json(rj));
  } else {
    out.push_back(report_from_json(doc));
  }
  return out;
}

}  // namespace decathlon
