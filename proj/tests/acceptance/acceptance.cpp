// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "json.hpp"

#include "pseudomine/analytics.hpp"
#include "pseudomine/cleaner.hpp"
#include "pseudomine/config.hpp"
#include "pseudomine/corpus.hpp"
#include "pseudomine/detector.hpp"
#include "pseudomine/extractor.hpp"
#include "pseudomine/latex.hpp"
#include "pseudomine/pipeline.hpp"
#include "pseudomine/references.hpp"
#include "pseudomine/text.hpp"
#include "pseudomine/topics.hpp"
#include "../support/oracles.hpp"
#include "../support/tempdir.hpp"

namespace fs = std::filesystem;
using namespace pseudomine;
using json = nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const fs::path kFixtures = PSEUDOMINE_FIXTURES_DIR;

// A scratch copy of the fixture corpus and its config.
struct Workspace {
  testutil::TempDir dir;
  PipelineConfig cfg;
  Workspace() {
    fs::copy(kFixtures / "corpus", dir / "corpus", fs::copy_options::recursive);
    fs::copy_file(kFixtures / "corpus_labels.csv", dir / "corpus_labels.csv");
    fs::copy_file(kFixtures / "pipeline.json", dir / "pipeline.json");
    cfg = load_config(dir / "pipeline.json");
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slice(const std::string& utf8, std::size_t start, std::size_t end) {
  const auto u = text::to_u32(utf8);
  return text::to_utf8(u.substr(start, end - start));
}

Verdict extraction_fidelity() {
  Workspace ws;
  if (!pipeline::run_stage(pipeline::Stage::Ingest, ws.cfg).ok()) return {false, "ingest reported errors"};
  const Clock clock;
  const auto outcome = pipeline::run_stage(pipeline::Stage::Extract, ws.cfg);
  const double elapsed = clock.seconds();

  const auto truth = json::parse(testutil::read_text(kFixtures / "corpus_truth.json"));
  using Key = std::tuple<std::string, std::string, std::size_t, std::size_t, bool>;
  std::set<Key> expected;
  for (const auto& s : truth["spans"]) {
    expected.insert({s["arxiv_id"].get<std::string>(), s["source_path"].get<std::string>(),
                     s["start"].get<std::size_t>(), s["end"].get<std::size_t>(), s["starred"].get<bool>()});
  }

  const auto corpus = corpus::load_corpus(ws.cfg.corpus_root, 4);
  std::set<Key> found;
  std::size_t records = 0, roundtrip_failures = 0;
  for (const auto& b : corpus.bundles) {
    for (const auto& r : extractor::read_records(ws.cfg.output_dir / "records", b.id())) {
      ++records;
      found.insert({r.arxiv_id, r.source_path, r.span.first, r.span.second, r.starred});
      const auto* file = b.find_file(r.source_path);
      if (!file || slice(file->text, r.span.first, r.span.second) != r.pseudocode) ++roundtrip_failures;
    }
  }
  std::size_t hit = 0;
  for (const auto& k : found) hit += expected.count(k);
  const double recall = expected.empty() ? 0 : static_cast<double>(hit) / static_cast<double>(expected.size());
  const double precision = records ? static_cast<double>(hit) / static_cast<double>(records) : 0;
  const bool pass = outcome.ok() && expected.size() == 120 && records == found.size() && recall == 1.0 &&
                    precision == 1.0 && roundtrip_failures == 0 && elapsed < 5.0;
  return {pass, fmt("environments=%zu records=%zu recall=%.4f precision=%.4f roundtrip_failures=%zu extract=%.2fs",
                    expected.size(), records, recall, precision, roundtrip_failures, elapsed)};
}

Verdict tag_count_agreement() {
  Workspace ws;
  pipeline::run_stage(pipeline::Stage::Ingest, ws.cfg);
  pipeline::run_stage(pipeline::Stage::Extract, ws.cfg);
  const auto truth = json::parse(testutil::read_text(kFixtures / "corpus_truth.json"));
  const auto corpus = corpus::load_corpus(ws.cfg.corpus_root, 4);
  std::size_t mismatches = 0, papers = 0;
  std::string first;
  for (const auto& b : corpus.bundles) {
    ++papers;
    const auto count = detector::detect_latex_algorithm(b).tag_count;
    const auto records = extractor::read_records(ws.cfg.output_dir / "records", b.id()).size();
    const std::size_t want = truth["environments_per_paper"].value(b.id(), 0);
    if (count != records || count != want) {
      if (first.empty()) first = " first=" + b.id();
      ++mismatches;
    }
  }
  return {mismatches == 0 && papers == 50, fmt("papers=%zu mismatches=%zu", papers, mismatches) + first};
}

std::vector<analytics::ValidationLabel> fixture_labels() {
  return analytics::parse_labels_csv(testutil::read_text(kFixtures / "validation/labels.csv"));
}

Verdict validation_arithmetic() {
  const auto labels = fixture_labels();
  const auto preds = analytics::parse_predictions_csv(testutil::read_text(kFixtures / "validation/predictions.csv"));
  const auto r = analytics::compute_confusion(labels, preds);
  const bool pass = r.tp + r.fn == 101 && r.fp + r.tn == 899 && r.fn == 34 && r.fp == 5 &&
                    r.fnr_percent() == 33.7 && r.fpr_percent() == 0.6 && std::abs(r.fnr - 0.33663) <= 1e-5 &&
                    std::abs(r.fpr - 0.00556) <= 1e-5;
  return {pass, fmt("tp=%zu fp=%zu tn=%zu fn=%zu FNR=%.1f%% FPR=%.1f%% fnr=%.6f fpr=%.6f", r.tp, r.fp, r.tn, r.fn,
                    r.fnr_percent(), r.fpr_percent(), r.fnr, r.fpr)};
}

Verdict indicative_crosscheck() {
  std::map<std::string, bool> kw;
  std::istringstream in(testutil::read_text(kFixtures / "validation/keywords.csv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    kw[line.substr(0, comma)] = line.substr(comma + 1) == "true";
  }
  const auto t = analytics::indicative_crosscheck(fixture_labels(), kw);
  const bool pass = t.yes_yes == 75 && t.yes_yes + t.yes_no == 101 && t.no_yes == 20 && t.no_yes + t.no_no == 899;
  return {pass, fmt("positives_with_keywords=%zu/%zu negatives_with_keywords=%zu/%zu", t.yes_yes, t.yes_yes + t.yes_no,
                    t.no_yes, t.no_yes + t.no_no)};
}

// Documents where term t appears in exactly df[t] of them, plus a filler term.
std::vector<topics::Tokens> df_corpus(std::size_t n, const std::map<std::string, std::size_t>& df) {
  std::vector<topics::Tokens> docs(n);
  for (std::size_t d = 0; d < n; ++d) {
    if (d % 2 == 0) docs[d].push_back("filler");
  }
  for (const auto& [term, count] : df) {
    for (std::size_t d = 0; d < count; ++d) docs[(d * 7919) % n].push_back(term);
  }
  return docs;
}

Verdict tfidf_thresholds() {
  // 0.00019 of 10,000 documents is not a whole count; df=1 is the nearest below 0.0002.
  const auto small = topics::build_dtm(df_corpus(10000, {{"f086", 8600}, {"f085", 8500}, {"f00020", 2}, {"f00019", 1}}));
  const auto large =
      topics::build_dtm(df_corpus(100000, {{"f086", 86000}, {"f085", 85000}, {"f00020", 20}, {"f00019", 19}}));
  const std::vector<std::string> want = {"f00020", "f085", "filler"};
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& w : v) s += (s.empty() ? "" : " ") + w;
    return s;
  };
  return {small.vocabulary == want && large.vocabulary == want,
          "n=10000 kept [" + join(small.vocabulary) + "] n=100000 kept [" + join(large.vocabulary) + "]"};
}

Verdict tfidf_oracle() {
  std::mt19937_64 rng(99);
  std::vector<std::string> words;
  for (char c = 'a'; c <= 'p'; ++c) words.push_back(std::string(2, c));
  double worst = 0;
  std::size_t corpora = 0, vocab_mismatch = 0;
  while (corpora < 100) {
    std::vector<topics::Tokens> docs(20);
    for (auto& d : docs) {
      const int len = std::uniform_int_distribution<int>(0, 25)(rng);
      for (int i = 0; i < len; ++i) d.push_back(words[std::uniform_int_distribution<std::size_t>(0, 15)(rng)]);
    }
    const auto want = oracle::tfidf(docs, 0.1, 0.85);
    if (want.vocabulary.empty()) continue;
    ++corpora;
    const auto got = topics::build_dtm(docs, {0.85, 0.1});
    if (got.vocabulary != want.vocabulary) {
      ++vocab_mismatch;
      continue;
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t t = 0; t < want.vocabulary.size(); ++t) {
        worst = std::max(worst, std::abs(got.weight(d, t) - want.dense[d][t]));
      }
    }
  }
  return {vocab_mismatch == 0 && worst <= 1e-9,
          fmt("corpora=%zu vocabulary_mismatches=%zu max_abs_diff=%.3g", corpora, vocab_mismatch, worst)};
}

Verdict lda_recovery() {
  const Clock clock;
  std::mt19937_64 gen(17);
  std::vector<topics::Tokens> docs(500);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const char topic = static_cast<char>('a' + d % 3);
    for (int i = 0; i < 60; ++i) {
      const char w = static_cast<char>('a' + std::uniform_int_distribution<int>(0, 19)(gen));
      docs[d].push_back(std::string{'v', topic, w});
    }
  }
  const auto dtm = topics::build_dtm(docs);

  int seeds_ok = 0;
  bool rows_ok = true, repeatable = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    topics::LdaParams p;
    p.num_topics = 3;
    p.seed = seed;
    const auto m = topics::fit_lda(dtm, p);
    bool pure = true;
    for (const auto& words : topics::top_words(m, 5)) {
      for (const auto& w : words) pure &= w[1] == words[0][1];
    }
    seeds_ok += pure;
    for (const auto* rows : {&m.topic_word, &m.doc_topic}) {
      for (const auto& row : *rows) rows_ok &= std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-9;
    }
    const auto again = topics::fit_lda(dtm, p);
    repeatable &= again.topic_word == m.topic_word && again.doc_topic == m.doc_topic;
  }
  const double elapsed = clock.seconds();
  return {seeds_ok >= 4 && rows_ok && repeatable && elapsed < 60.0,
          fmt("pure_seeds=%d/5 rows_sum_to_one=%s bit_identical=%s time=%.2fs", seeds_ok, rows_ok ? "yes" : "no",
              repeatable ? "yes" : "no", elapsed)};
}

Verdict snippet_rule() {
  std::mt19937_64 rng(1200300);
  const std::u32string alphabet = U"abcde fgh ij })\né数";
  const references::SnippetConfig cfg{1200, 300, U".!?"};
  std::size_t disagreements = 0, bound_violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4000)(rng);
    // Sparse terminators so both the trimmed and untrimmed branches occur.
    const double density = std::uniform_real_distribution<double>(0.0, 0.02)(rng);
    std::u32string t;
    for (std::size_t i = 0; i < n; ++i) {
      const bool term = std::bernoulli_distribution(density)(rng);
      t.push_back(term ? U".!?"[rng() % 3] : alphabet[rng() % alphabet.size()]);
    }
    const std::size_t off = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(40, n - off))(rng);
    const auto got = references::extract_snippet(t, {off, len}, cfg);
    const auto want = oracle::snippet(t, off, len, 1200, 300, U".!?");
    if (got.text != text::to_utf8(want.text) || got.trimmed_left != want.trimmed_left ||
        got.trimmed_right != want.trimmed_right) {
      ++disagreements;
    }
    if (text::scalar_count(got.text) > 2 * 1200 + len) ++bound_violations;
  }
  return {disagreements == 0 && bound_violations == 0,
          fmt("cases=1000 disagreements=%zu length_bound_violations=%zu", disagreements, bound_violations)};
}

Verdict cleaner_idempotence() {
  std::mt19937_64 rng(31337);
  std::size_t not_idempotent = 0, markup_left = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string input = oracle::latex_like(rng);
    const std::string once = cleaner::clean(input);
    if (cleaner::clean(once) != once) ++not_idempotent;
    bool escaped_note = false;
    for (auto p = input.find("% note"); p != std::string::npos; p = input.find("% note", p + 1)) {
      escaped_note |= latex::is_escaped(input, p);
    }
    if (once.find_first_of("$\\%") != std::string::npos || (!escaped_note && once.find("note") != std::string::npos)) {
      ++markup_left;
    }
  }
  return {not_idempotent == 0 && markup_left == 0,
          fmt("cases=1000 not_idempotent=%zu markup_remnants=%zu", not_idempotent, markup_left)};
}

bool valid_record(const json& j) {
  static const std::vector<std::string> keys = {"arxiv_id",    "year",       "title",      "category",
                                                "subcategory", "pseudocode", "supplements", "reference_snippets",
                                                "source_path", "span",       "starred"};
  if (!j.is_object() || j.size() != keys.size()) return false;
  for (const auto& k : keys) {
    if (!j.contains(k)) return false;
  }
  auto str_or_null = [&](const char* k) { return j[k].is_string() || j[k].is_null(); };
  if (!j["arxiv_id"].is_string() || !j["pseudocode"].is_string() || !j["source_path"].is_string()) return false;
  if (!(j["year"].is_number_integer() || j["year"].is_null())) return false;
  if (!str_or_null("title") || !str_or_null("category") || !str_or_null("subcategory")) return false;
  if (!j["starred"].is_boolean()) return false;
  if (!j["span"].is_array() || j["span"].size() != 2 || j["span"][0] > j["span"][1]) return false;
  if (!j["reference_snippets"].is_array()) return false;
  for (const auto& s : j["reference_snippets"]) {
    if (!s.is_string()) return false;
  }
  if (!j["supplements"].is_array()) return false;
  for (const auto& s : j["supplements"]) {
    for (const char* k : {"label", "content", "environment", "source_path"}) {
      if (!s.contains(k) || !s[k].is_string()) return false;
    }
  }
  return true;
}

Verdict end_to_end() {
  Workspace ws;
  const Clock clock;
  const std::string cmd = std::string(PSEUDOMINE_CLI_PATH) + " --log-level warn --config '" +
                          (ws.dir / "pipeline.json").string() + "' all > '" + (ws.dir / "stdout.json").string() +
                          "' 2> '" + (ws.dir / "stderr.log").string() + "'";
  const int raw = std::system(cmd.c_str());
  const double elapsed = clock.seconds();
  const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  const fs::path out = ws.cfg.output_dir;

  std::size_t records = 0, invalid = 0;
  if (fs::exists(out / "records")) {
    for (const auto& e : fs::recursive_directory_iterator(out / "records")) {
      if (!e.is_regular_file()) continue;
      ++records;
      try {
        invalid += !valid_record(json::parse(testutil::read_text(e.path())));
      } catch (const std::exception&) {
        ++invalid;
      }
    }
  }

  bool csvs = true;
  for (const char* f : {"stats.csv", "yearly.csv", "categories.csv"}) {
    csvs &= fs::exists(out / f) && !testutil::read_text(out / f).empty();
  }

  std::map<int, int> rows_per_year;
  bool header_ok = false;
  if (fs::exists(out / "topics.csv")) {
    std::istringstream in(testutil::read_text(out / "topics.csv"));
    std::string line;
    std::getline(in, line);
    header_ok = line == "year,cluster,word1,word2,word3,word4,word5";
    while (std::getline(in, line)) ++rows_per_year[std::stoi(line.substr(0, line.find(',')))];
  }
  // Eligible years: snippets dated 2010 or later with at least as many documents as topics.
  std::map<int, std::size_t> docs_per_year;
  if (fs::exists(out / "snippets.jsonl")) {
    std::istringstream in(testutil::read_text(out / "snippets.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
      const auto j = json::parse(line);
      if (j["year"].is_number_integer() && j["year"].get<int>() >= 2010) ++docs_per_year[j["year"].get<int>()];
    }
  }
  std::set<int> eligible;
  for (const auto& [y, n] : docs_per_year) {
    if (n >= ws.cfg.lda.num_topics) eligible.insert(y);
  }
  bool topics_ok = header_ok && !eligible.empty();
  std::string years;
  for (const auto& [y, n] : rows_per_year) {
    topics_ok &= y >= 2010 && n == 10 && eligible.contains(y);
    years += fmt(" %d:%d", y, n);
  }
  topics_ok &= rows_per_year.size() == eligible.size();

  const bool pass = status == 0 && elapsed < 60.0 && records == 120 && invalid == 0 && csvs && topics_ok;
  return {pass, fmt("exit=%d time=%.2fs records=%zu invalid=%zu stats_csvs=%s topic_rows=[", status, elapsed,
                    records, invalid, csvs ? "yes" : "no") +
                    years + " ]"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"extraction-fidelity", extraction_fidelity},
      {"tag-count-agreement", tag_count_agreement},
      {"validation-arithmetic", validation_arithmetic},
      {"indicative-crosscheck", indicative_crosscheck},
      {"tfidf-thresholds", tfidf_thresholds},
      {"tfidf-oracle", tfidf_oracle},
      {"lda-recovery", lda_recovery},
      {"snippet-rule", snippet_rule},
      {"cleaner-idempotence", cleaner_idempotence},
      {"end-to-end", end_to_end},
  };
  spdlog::set_level(spdlog::level::off);
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %-24s %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
