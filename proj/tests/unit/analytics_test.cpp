#include "pseudomine/analytics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "json.hpp"

#include "pseudomine/error.hpp"

namespace pseudomine {
namespace {

using analytics::PaperObservation;
using analytics::ValidationLabel;

std::vector<PaperObservation> ten_papers() {
  std::vector<PaperObservation> p;
  for (int i = 0; i < 10; ++i) {
    PaperObservation o;
    o.arxiv_id = "p" + std::to_string(i);
    o.year = i < 4 ? std::optional<int>(2010) : (i < 9 ? std::optional<int>(2012) : std::nullopt);
    o.category = i < 3 ? "cs.LG" : "math.OC";
    o.has_latex = i != 0;
    o.tag_found = i >= 1 && i <= 3;
    o.tag_count = o.tag_found ? 2 : 0;
    o.keyword_hits = i < 5 ? 1 : 0;
    p.push_back(o);
  }
  return p;
}

TEST(Stats, Totals) {
  const auto s = analytics::compute_stats(ten_papers());
  EXPECT_EQ(s.total_papers, 10u);
  EXPECT_EQ(s.papers_with_latex, 9u);
  EXPECT_EQ(s.papers_with_algorithm_tag, 3u);
  EXPECT_EQ(s.papers_with_keywords, 5u);
  EXPECT_DOUBLE_EQ(s.latex_fraction(), 0.9);
  const std::string csv = analytics::stats_csv(s);
  EXPECT_NE(csv.find("latex_fraction,0.900000"), std::string::npos);
}

TEST(Stats, EmptyCorpus) {
  const auto s = analytics::compute_stats({});
  EXPECT_EQ(s.total_papers, 0u);
  EXPECT_EQ(s.latex_fraction(), 0.0);
  EXPECT_TRUE(analytics::yearly_counts({}).empty());
  EXPECT_TRUE(analytics::category_distribution({}).empty());
}

TEST(Yearly, CountsAndUnknownLast) {
  const auto rows = analytics::yearly_counts(ten_papers());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].year, 2010);
  EXPECT_EQ(rows[0].counts.scanned, 4u);
  EXPECT_EQ(rows[1].year, 2012);
  EXPECT_EQ(rows[1].counts.scanned, 5u);
  EXPECT_FALSE(rows[2].year.has_value());
  EXPECT_EQ(rows[2].cumulative.scanned, 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].cumulative.scanned, rows[i - 1].cumulative.scanned);
    EXPECT_GE(rows[i].cumulative.with_tag, rows[i - 1].cumulative.with_tag);
    EXPECT_GE(rows[i].cumulative.with_keywords, rows[i - 1].cumulative.with_keywords);
  }
  const std::string csv = analytics::yearly_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "year,scanned,with_tag,with_keywords,cumulative_scanned,cumulative_with_tag,cumulative_with_keywords");
  EXPECT_NE(csv.find("\nunknown,"), std::string::npos);
}

TEST(Yearly, SimpleCounting) {
  std::vector<PaperObservation> p(3);
  p[0].year = 2010;
  p[1].year = 2010;
  p[2].year = 2012;
  const auto rows = analytics::yearly_counts(p);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].counts.scanned, 2u);
  EXPECT_EQ(rows[1].counts.scanned, 1u);
}

TEST(Categories, KeywordPapersOnly) {
  std::vector<PaperObservation> p(5);
  for (int i = 0; i < 3; ++i) p[i] = {"a" + std::to_string(i), 2020, "cs.LG", true, false, 0, 2};
  p[3] = {"b", 2020, "math.OC", true, false, 0, 1};
  p[4] = {"c", 2020, "cs.LG", true, false, 0, 0};
  const auto dist = analytics::category_distribution(p);
  EXPECT_EQ(dist, (std::map<std::string, std::size_t>{{"cs.LG", 3}, {"math.OC", 1}}));
  std::size_t sum = 0;
  for (const auto& [_, n] : dist) sum += n;
  EXPECT_EQ(sum, analytics::compute_stats(p).papers_with_keywords);
}

TEST(Categories, MissingCategoryIsUnknown) {
  std::vector<PaperObservation> p(1);
  p[0].keyword_hits = 1;
  EXPECT_EQ(analytics::category_distribution(p).at("unknown"), 1u);
}

TEST(Observations, CsvRoundTrip) {
  const auto p = ten_papers();
  EXPECT_EQ(analytics::parse_observations_csv(analytics::observations_csv(p)), p);
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("id" + std::to_string(1000 + i));
  return out;
}

TEST(Sample, DistinctDeterministicSorted) {
  const auto a = analytics::sample_uniform(ids(100), 10, 7);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(std::set<std::string>(a.begin(), a.end()).size(), 10u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(a, analytics::sample_uniform(ids(100), 10, 7));
  auto shuffled = ids(100);
  std::reverse(shuffled.begin(), shuffled.end());
  EXPECT_EQ(a, analytics::sample_uniform(shuffled, 10, 7));
}

TEST(Sample, Boundaries) {
  EXPECT_EQ(analytics::sample_uniform(ids(5), 5, 1), ids(5));
  EXPECT_TRUE(analytics::sample_uniform(ids(5), 0, 1).empty());
  EXPECT_THROW(analytics::sample_uniform(ids(5), 6, 1), Error);
}

TEST(SampleProperty, InclusionFrequencyIsUniform) {
  const auto population = ids(100);
  std::map<std::string, int> hits;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    for (const auto& id : analytics::sample_uniform(population, 50, static_cast<std::uint64_t>(seed))) ++hits[id];
  }
  const double se = std::sqrt(0.5 * 0.5 / trials);
  for (const auto& id : population) EXPECT_NEAR(hits[id] / static_cast<double>(trials), 0.5, 5 * se) << id;
}

std::vector<ValidationLabel> labels(int pos, int neg) {
  std::vector<ValidationLabel> out;
  for (int i = 0; i < pos; ++i) out.push_back({"pos" + std::to_string(i), true, ""});
  for (int i = 0; i < neg; ++i) out.push_back({"neg" + std::to_string(i), false, ""});
  return out;
}

TEST(Confusion, CannedPredictorArithmetic) {
  const auto l = labels(101, 899);
  std::map<std::string, bool> pred;
  for (const auto& x : l) pred[x.arxiv_id] = x.has_pseudocode;
  for (int i = 0; i < 34; ++i) pred["pos" + std::to_string(i)] = false;
  for (int i = 0; i < 5; ++i) pred["neg" + std::to_string(i)] = true;
  const auto r = analytics::compute_confusion(l, pred);
  EXPECT_EQ(r.fn, 34u);
  EXPECT_EQ(r.tp, 67u);
  EXPECT_EQ(r.fp, 5u);
  EXPECT_EQ(r.tn, 894u);
  EXPECT_NEAR(r.fnr, 0.33663, 1e-5);
  EXPECT_NEAR(r.fpr, 0.00556, 1e-5);
  EXPECT_DOUBLE_EQ(r.fnr_percent(), 33.7);
  EXPECT_DOUBLE_EQ(r.fpr_percent(), 0.6);
}

TEST(Confusion, PerfectAndDegeneratePredictors) {
  const auto l = labels(10, 90);
  std::map<std::string, bool> perfect, never;
  for (const auto& x : l) {
    perfect[x.arxiv_id] = x.has_pseudocode;
    never[x.arxiv_id] = false;
  }
  const auto p = analytics::compute_confusion(l, perfect);
  EXPECT_EQ(p.fpr, 0.0);
  EXPECT_EQ(p.fnr, 0.0);
  const auto n = analytics::compute_confusion(l, never);
  EXPECT_EQ(n.fnr, 1.0);
  EXPECT_EQ(n.fpr, 0.0);
}

TEST(Confusion, MissingPredictionThrows) {
  EXPECT_THROW(analytics::compute_confusion(labels(1, 0), {}), Error);
}

TEST(ConfusionProperty, PartitionAndPermutationInvariance) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int pos = std::uniform_int_distribution<int>(0, 30)(rng);
    const int neg = std::uniform_int_distribution<int>(0, 30)(rng);
    auto l = labels(pos, neg);
    std::map<std::string, bool> pred;
    for (const auto& x : l) pred[x.arxiv_id] = rng() & 1;
    const auto r = analytics::compute_confusion(l, pred);
    EXPECT_EQ(r.tp + r.fn, static_cast<std::size_t>(pos));
    EXPECT_EQ(r.fp + r.tn, static_cast<std::size_t>(neg));
    std::shuffle(l.begin(), l.end(), rng);
    const auto s = analytics::compute_confusion(l, pred);
    EXPECT_EQ(std::tie(r.tp, r.fp, r.tn, r.fn), std::tie(s.tp, s.fp, s.tn, s.fn));
  }
}

TEST(Crosscheck, HandCountedFixture) {
  const auto l = labels(4, 6);
  std::map<std::string, bool> kw;
  for (const auto& x : l) kw[x.arxiv_id] = false;
  kw["pos0"] = kw["pos1"] = kw["pos2"] = true;
  kw["neg0"] = true;
  const auto t = analytics::indicative_crosscheck(l, kw);
  EXPECT_EQ(t, (analytics::ContingencyTable{3, 1, 1, 5}));
  EXPECT_EQ(analytics::indicative_crosscheck({}, {}), analytics::ContingencyTable{});
}

TEST(LabelsCsv, RoundTripAndValidation) {
  const std::vector<ValidationLabel> l = {{"a", true, "enumerate, not algorithm"}, {"b", false, ""}};
  const auto back = analytics::parse_labels_csv(analytics::labels_csv(l));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].notes, "enumerate, not algorithm");
  EXPECT_THROW(analytics::parse_labels_csv("arxiv_id,has_pseudocode,notes\na,yes,\n"), Error);
  EXPECT_THROW(analytics::parse_labels_csv("arxiv_id,has_pseudocode,notes\na,true,\na,false,\n"), Error);
  EXPECT_THROW(analytics::parse_labels_csv("id,label\n"), Error);
}

TEST(ValidationJson, ExactFieldNames) {
  analytics::ValidationReport r{67, 5, 894, 34, 5.0 / 899, 34.0 / 101};
  const auto j = nlohmann::json::parse(analytics::validation_json(r, std::nullopt));
  for (const char* k : {"tp", "fp", "tn", "fn", "fpr", "fnr"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["fn"], 34);
  EXPECT_FALSE(j.contains("indicative"));
}

TEST(RoundPercent, OneDecimal) {
  EXPECT_DOUBLE_EQ(analytics::round_percent(34.0 / 101), 33.7);
  EXPECT_DOUBLE_EQ(analytics::round_percent(5.0 / 899), 0.6);
  EXPECT_DOUBLE_EQ(analytics::round_percent(0), 0.0);
}

}  // namespace
}  // namespace pseudomine
