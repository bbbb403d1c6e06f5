#include "decathlon/scoring.hpp"

#include <doctest.h>

#include <algorithm>
#include <iterator>
#include <random>
#include <sstream>

using namespace decathlon;

namespace {

FeatureScore scored(Feature f, double raw, double alpha, double beta, double w) {
  return make_score(f, raw, LedgerEntry{f, alpha, beta, w});
}

// Quoted-field CSV splitter used as an independent reader.
std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
    } else {
      field += c;
    }
  }
  return rows;
}

std::vector<AlgorithmReport> sample_reports() {
  auto make = [](const std::string& name, double stab_points, double dist_raw) {
    std::vector<FeatureResult> r;
    FeatureScore s = scored(Feature::stability, 0.5, 1.0, 0.5, 1.0);
    s.points = stab_points;
    r.push_back({Feature::stability, s, {}});
    r.push_back({Feature::distance, scored(Feature::distance, dist_raw, 10.0, 0.0, 1.0), {}});
    r.push_back(FeatureResult::absent(Feature::covolume, "unsupported dimension, \"4\""));
    return aggregate(name, std::move(r));
  };
  return {make("kmeans:k=3", 50.0, 1.234567891), make("dbscan:eps=1", 0.0, 2.0)};
}

}  // namespace

TEST_CASE("aggregate totals") {
  std::vector<FeatureScore> at_beta;
  for (Feature f : kAllFeatures) at_beta.push_back(scored(f, 3.0, 7.0, 3.0, 2.0));
  const AlgorithmReport zero = aggregate("a", at_beta);
  CHECK(zero.total == 0.0);
  CHECK(zero.comparable);
  CHECK(zero.features.size() == 7);

  const AlgorithmReport two = aggregate("a", {scored(Feature::complexity, 2.0, 50.0, 4.0, 2.0),
                                              scored(Feature::stability, 1.0, 100.0, 0.5, 1.0)});
  CHECK(two.total == doctest::Approx(250.0));
  CHECK(two.features.front().feature == Feature::stability);

  CHECK_THROWS_WITH_AS(aggregate("a", {scored(Feature::noise, 1, 1, 0, 1), scored(Feature::noise, 2, 1, 0, 1)}),
                       doctest::Contains("duplicate"), Error);

  const AlgorithmReport partial =
      aggregate("a", std::vector<FeatureResult>{FeatureResult::absent(Feature::shape, "no boundary"),
                                                {Feature::noise, scored(Feature::noise, 1, 2, 0, 1), {}}});
  CHECK_FALSE(partial.comparable);
  CHECK(partial.total == doctest::Approx(2.0));
}

TEST_CASE("aggregate is permutation invariant and points recompute") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<FeatureScore> scores;
    for (Feature f : kAllFeatures) scores.push_back(scored(f, u(rng), u(rng), u(rng), u(rng) / 4));
    const AlgorithmReport base = aggregate("x", scores);
    std::shuffle(scores.begin(), scores.end(), rng);
    const AlgorithmReport shuffled = aggregate("x", scores);
    CHECK(shuffled.total == base.total);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(shuffled.features[i].feature == kAllFeatures[i]);
      const FeatureScore& s = *shuffled.features[i].score;
      CHECK(s.points == doctest::Approx(scale_score(s.raw, s.entry)).epsilon(1e-15));
    }
  }
}

TEST_CASE("score table") {
  const auto reports = sample_reports();
  const ScoreTable table = build_table(reports);
  REQUIRE(table.rows.size() == 3);
  const TableRow& stab = table.rows[0];
  CHECK(stab.best == "kmeans:k=3");
  CHECK(stab.worst == "dbscan:eps=1");
  CHECK(*stab.best_points == 50.0);
  CHECK(*stab.worst_points == 0.0);
  CHECK(*stab.average_points == 25.0);
  CHECK(*stab.alpha == 1.0);
  CHECK(table.rows[2].feature == Feature::covolume);
  CHECK_FALSE(table.rows[2].best.has_value());
  CHECK(table.warnings == 2);

  const ScoreTable one = build_table({reports[0]});
  CHECK(one.rows[0].best == one.rows[0].worst);
  CHECK(*one.rows[0].average_points == 50.0);

  // Equal points: the lexicographically smallest name wins both columns.
  const AlgorithmReport b = aggregate("b", {scored(Feature::noise, 1, 1, 0, 1)});
  const AlgorithmReport a = aggregate("a", {scored(Feature::noise, 1, 1, 0, 1)});
  const AlgorithmReport c = aggregate("c", {scored(Feature::noise, 1, 2, 0, 1)});
  for (const auto& order : {std::vector{b, a, c}, std::vector{c, b, a}, std::vector{a, c, b}}) {
    const ScoreTable t = build_table(order);
    CHECK(t.rows[0].best == "c");
    CHECK(t.rows[0].worst == "a");
    CHECK_FALSE(t.rows[0].alpha.has_value());
    CHECK(*t.rows[0].beta == 0.0);
    CHECK(*t.rows[0].best_points >= *t.rows[0].average_points);
    CHECK(*t.rows[0].average_points >= *t.rows[0].worst_points);
  }
}

TEST_CASE("rendering") {
  const auto reports = sample_reports();
  const ScoreTable table = build_table(reports);

  std::ostringstream text;
  render(text, table, Format::text);
  std::istringstream lines(text.str());
  std::vector<std::vector<std::string>> words;
  for (std::string line; std::getline(lines, line);) {
    std::istringstream in(line);
    words.emplace_back(std::istream_iterator<std::string>(in), std::istream_iterator<std::string>());
  }
  REQUIRE(words.size() >= 4);
  CHECK(words[0] == std::vector<std::string>{"feature", "alpha", "beta", "w", "best", "worst", "best", "pts", "worst",
                                             "pts", "average"});
  CHECK(words[3] == std::vector<std::string>{"covolume", "n/a", "n/a", "n/a", "n/a", "n/a", "n/a", "n/a", "n/a"});

  std::ostringstream j1, j2;
  render(j1, reports, Format::json);
  render(j2, reports, Format::json);
  CHECK(j1.str() == j2.str());
  CHECK(j1.str().find("1.23457") != std::string::npos);
  CHECK(j1.str().find("1.234567891") == std::string::npos);
  CHECK(j1.str().find("\"status\": \"absent\"") != std::string::npos);

  std::ostringstream csv;
  render(csv, reports, Format::csv);
  const auto rows = read_csv(csv.str());
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) CHECK(r.size() == rows[0].size());
  CHECK(rows[3][0] == "kmeans:k=3");
  CHECK(rows[3][11] == "absent");
  CHECK(rows[3][12] == "unsupported dimension, \"4\"");

  std::ostringstream table_csv;
  render(table_csv, table, Format::csv);
  const auto trows = read_csv(table_csv.str());
  REQUIRE(trows.size() == 4);
  CHECK(trows[0] == std::vector<std::string>{"feature", "alpha", "beta", "weight", "best", "worst", "best_points",
                                             "worst_points", "average_points"});
  CHECK(trows[3][4] == "n/a");

  CHECK(parse_format("csv") == Format::csv);
  CHECK_THROWS_AS(parse_format("xml"), Error);
  CHECK(format_number(1234567.0) == "1.23457e+06");
}

TEST_CASE("report json round trip") {
  const auto reports = sample_reports();
  std::ostringstream first;
  render(first, reports, Format::json);
  const auto parsed = parse_reports(first.str());
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].algorithm == "kmeans:k=3");
  CHECK_FALSE(parsed[0].comparable);
  CHECK(parsed[0].features[2].error == "unsupported dimension, \"4\"");
  std::ostringstream second;
  render(second, parsed, Format::json);
  CHECK(second.str() == first.str());

  const auto single = parse_reports(R"({"algorithm": "z", "features": [{"name": "noise", "status": "ok", "raw": 1,
    "alpha": 2, "beta": 0, "weight": 1, "points": 2, "ci": null}]})");
  CHECK(single.at(0).total == 2.0);
  CHECK_THROWS_AS(parse_reports("{not json"), Error);
  CHECK_THROWS_AS(parse_reports(R"({"reports": 3})"), Error);
  CHECK_THROWS_AS(parse_reports(R"({"algorithm": "z", "features": [{"name": "bogus", "status": "ok"}]})"), Error);
}
