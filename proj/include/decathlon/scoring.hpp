#pragma once

#include "decathlon/core.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace decathlon {

/// Outcome of one feature for one algorithm: a score, or the reason it is
/// absent.
struct FeatureResult {
  Feature feature = Feature::stability;
  std::optional<FeatureScore> score;
  std::string error;

  static FeatureResult absent(Feature f, std::string why) { return {f, std::nullopt, std::move(why)}; }
};

struct AlgorithmReport {
  std::string algorithm;
  std::vector<FeatureResult> features;  // ordered as kAllFeatures
  double total = 0.0;                   // sum of points over present features
  bool comparable = true;               // false when any feature is absent
};

/// Sums points and orders features canonically. Throws on duplicates.
AlgorithmReport aggregate(std::string algorithm, std::vector<FeatureResult> results);
AlgorithmReport aggregate(std::string algorithm, const std::vector<FeatureScore>& scores);

struct TableRow {
  Feature feature = Feature::stability;
  /// Ledger values when every report used the same ones.
  std::optional<double> alpha, beta, weight;
  std::optional<std::string> best, worst;
  std::optional<double> best_points, worst_points, average_points;
  int reporting = 0;  // reports carrying this feature
};

struct ScoreTable {
  std::vector<TableRow> rows;  // ordered as kAllFeatures
  std::vector<std::string> algorithms;
  int warnings = 0;  // (report, feature) pairs missing from the table
};

/// Best = most points, worst = fewest; ties go to the lexicographically
/// smallest algorithm name.
ScoreTable build_table(const std::vector<AlgorithmReport>& reports);

enum class Format { text, csv, json };
Format parse_format(std::string_view name);

void render(std::ostream& out, const ScoreTable& table, Format format);
void render(std::ostream& out, const std::vector<AlgorithmReport>& reports, Format format);

/// Inverse of the JSON report rendering. Accepts {"reports": [...]} or a
/// single report object.
std::vector<AlgorithmReport> parse_reports(std::string_view json_text);

/// Value printed with 6 significant digits.
std::string format_number(double v);

}  // namespace decathlon
