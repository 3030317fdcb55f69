#include "pseudomine/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "json.hpp"

#include "pseudomine/analytics.hpp"
#include "pseudomine/archive.hpp"
#include "pseudomine/cleaner.hpp"
#include "pseudomine/corpus.hpp"
#include "pseudomine/csv.hpp"
#include "pseudomine/detector.hpp"
#include "pseudomine/error.hpp"
#include "pseudomine/extractor.hpp"
#include "pseudomine/fsutil.hpp"
#include "pseudomine/parallel.hpp"
#include "pseudomine/references.hpp"
#include "pseudomine/topics.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace pseudomine::pipeline {

namespace {

constexpr std::pair<Stage, const char*> kStageNames[] = {
    {Stage::Ingest, "ingest"}, {Stage::Detect, "detect"}, {Stage::Extract, "extract"},
    {Stage::Refs, "refs"},     {Stage::Clean, "clean"},   {Stage::Cluster, "cluster"},
    {Stage::Stats, "stats"},   {Stage::Sample, "sample"}, {Stage::Validate, "validate"},
};

fs::path records_dir(const PipelineConfig& cfg) { return cfg.output_dir / "records"; }

std::string read_output(const PipelineConfig& cfg, const char* name, const char* producer) {
  const fs::path path = cfg.output_dir / name;
  if (!fs::is_regular_file(path)) {
    throw Error(path.string() + " not found; run '" + producer + "' first");
  }
  return fsutil::read_file(path);
}

void require_corpus(const PipelineConfig& cfg) {
  if (cfg.corpus_root.empty()) throw ConfigError("corpus_root is not set");
  if (!fs::is_directory(cfg.corpus_root)) throw Error("corpus root " + cfg.corpus_root.string() + " is not a directory");
}

corpus::PairingResult load(const PipelineConfig& cfg, StageOutcome& outcome) {
  require_corpus(cfg);
  auto pairing = corpus::load_corpus(cfg.corpus_root, cfg.jobs);
  for (const auto& w : pairing.warnings) spdlog::warn("{}", w);
  outcome.warnings.insert(outcome.warnings.end(), pairing.warnings.begin(), pairing.warnings.end());
  outcome.papers = pairing.bundles.size();
  return pairing;
}

// Removes a directory tree and recreates it empty.
void reset_dir(const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (ec) throw IoError("cannot clear " + dir.string() + ": " + ec.message());
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::vector<std::string> record_ids(const PipelineConfig& cfg) {
  std::vector<std::string> ids;
  const fs::path dir = records_dir(cfg);
  if (!fs::is_directory(dir)) throw Error(dir.string() + " not found; run 'extract' first");
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_directory()) ids.push_back(de.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Runs fn for each index, catching per-item failures into the outcome.
template <class Fn>
void for_each_paper(const std::vector<std::string>& ids, const PipelineConfig& cfg, StageOutcome& outcome, Fn&& fn) {
  std::vector<std::optional<std::string>> failures(ids.size());
  parallel_for(ids.size(), cfg.jobs, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const std::exception& e) {
      failures[i] = e.what();
      spdlog::error("{} {}: {}", stage_name(outcome.stage), ids[i], e.what());
    }
  });
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (failures[i]) outcome.errors.push_back({ids[i], *failures[i]});
  }
}

std::vector<std::string> bundle_ids(const std::vector<corpus::PaperBundle>& bundles) {
  std::vector<std::string> ids;
  ids.reserve(bundles.size());
  for (const auto& b : bundles) ids.push_back(b.id());
  return ids;
}

void ingest(const PipelineConfig& cfg, StageOutcome& outcome) {
  require_corpus(cfg);
  const fs::path sources = cfg.corpus_root / "sources";
  std::vector<std::string> dirs;
  if (fs::is_directory(sources)) {
    for (const auto& de : fs::directory_iterator(sources)) {
      if (de.is_directory()) dirs.push_back(de.path().filename().string());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<archive::UnpackReport> reports(dirs.size());
  for_each_paper(dirs, cfg, outcome, [&](std::size_t i) {
    reports[i] = archive::unpack_archives(sources / dirs[i], cfg.max_archive_depth);
    if (reports[i].archives_opened) {
      spdlog::info("ingest {}: unpacked {} archives, {} files", dirs[i], reports[i].archives_opened,
                   reports[i].files_produced);
    }
  });
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (const auto& w : reports[i].warnings) {
      spdlog::warn("{}: {}", dirs[i], w);
      outcome.warnings.push_back(dirs[i] + ": " + w);
    }
  }

  const auto pairing = load(cfg, outcome);
  ordered_json manifest;
  manifest["papers"] = ordered_json::array();
  for (const auto& b : pairing.bundles) {
    ordered_json files = ordered_json::array();
    for (const auto& f : b.latex_files) files.push_back({{"path", f.path}, {"encoding", text::encoding_name(f.encoding)}});
    manifest["papers"].push_back({{"arxiv_id", b.id()},
                                  {"year", b.metadata.year ? ordered_json(*b.metadata.year) : ordered_json(nullptr)},
                                  {"has_latex", b.has_latex},
                                  {"has_pdf_text", b.pdf_text.has_value()},
                                  {"files", files}});
    spdlog::info("ingest {}: {} source files, pdf text {}", b.id(), b.latex_files.size(),
                 b.pdf_text ? "yes" : "no");
  }
  const auto& u = pairing.unmatched;
  manifest["unmatched"] = {{"pdf_only", u.pdf_only}, {"source_only", u.source_only}, {"metadata_only", u.metadata_only}};
  fsutil::write_file_atomic(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");

  std::string unmatched = "arxiv_id,missing\n";
  auto rows = [&](const std::vector<std::string>& ids, const char* missing) {
    for (const auto& id : ids) unmatched += csv::join({id, missing}) + "\n";
  };
  rows(u.pdf_only, "sources");
  rows(u.source_only, "pdf_text");
  rows(u.metadata_only, "pdf_text+sources");
  fsutil::write_file_atomic(cfg.output_dir / "unmatched.csv", unmatched);
}

void detect(const PipelineConfig& cfg, StageOutcome& outcome) {
  const auto pairing = load(cfg, outcome);
  const auto& bundles = pairing.bundles;
  std::vector<analytics::PaperObservation> obs(bundles.size());
  std::vector<std::vector<detector::KeywordHit>> hits(bundles.size());
  std::vector<char> done(bundles.size(), 0);
  for_each_paper(bundle_ids(bundles), cfg, outcome, [&](std::size_t i) {
    const auto& b = bundles[i];
    const auto tags = detector::detect_latex_algorithm(b);
    if (b.pdf_text) hits[i] = detector::detect_indicative_keywords(*b.pdf_text, cfg.keyword_classes);
    obs[i] = {b.id(), b.metadata.year, b.metadata.category, b.has_latex, tags.latex_tag_found, tags.tag_count,
              hits[i].size()};
    done[i] = 1;
    spdlog::info("detect {}: tags={} keywords={}", b.id(), tags.tag_count, hits[i].size());
  });

  std::vector<analytics::PaperObservation> ok;
  std::string hit_rows = "arxiv_id,class,offset,text\n";
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    if (!done[i]) continue;
    ok.push_back(obs[i]);
    for (const auto& h : hits[i]) {
      hit_rows += csv::join({bundles[i].id(), detector::keyword_class_name(h.keyword_class),
                             std::to_string(h.file_offset), h.matched_text}) +
                  "\n";
    }
  }
  fsutil::write_file_atomic(cfg.output_dir / "detection.csv", analytics::observations_csv(ok));
  fsutil::write_file_atomic(cfg.output_dir / "keyword_hits.csv", hit_rows);
}

void extract(const PipelineConfig& cfg, StageOutcome& outcome) {
  const auto pairing = load(cfg, outcome);
  const auto& bundles = pairing.bundles;
  const fs::path out = records_dir(cfg);
  reset_dir(out);
  std::vector<std::vector<std::string>> warnings(bundles.size());
  for_each_paper(bundle_ids(bundles), cfg, outcome, [&](std::size_t i) {
    const auto& b = bundles[i];
    auto extraction = extractor::extract_bundle(b);
    for (const auto& w : extraction.warnings) {
      warnings[i].push_back(b.id() + "/" + w.source_path + "@" + std::to_string(w.offset) + ": " + w.message);
    }
    std::size_t ordinal = 0;
    for (const auto& span : extraction.spans) {
      auto supplements = extractor::extract_referenced_content(span, b);
      for (const auto& w : supplements.warnings) warnings[i].push_back(b.id() + ": " + w.message);
      extractor::emit_record(span, std::move(supplements.records), b.metadata, ordinal++, out);
    }
    spdlog::info("extract {}: {} records", b.id(), ordinal);
  });
  for (const auto& ws : warnings) {
    for (const auto& w : ws) spdlog::warn("{}", w);
    outcome.warnings.insert(outcome.warnings.end(), ws.begin(), ws.end());
  }
}

void refs(const PipelineConfig& cfg, StageOutcome& outcome) {
  const auto ids = record_ids(cfg);
  const auto pairing = load(cfg, outcome);
  std::map<std::string, const corpus::PaperBundle*> by_id;
  for (const auto& b : pairing.bundles) by_id[b.id()] = &b;
  outcome.papers = ids.size();
  const fs::path out = records_dir(cfg);
  for_each_paper(ids, cfg, outcome, [&](std::size_t i) {
    auto it = by_id.find(ids[i]);
    if (it == by_id.end()) throw Error("paper is no longer in the corpus");
    auto records = extractor::read_records(out, ids[i]);
    std::size_t total = 0;
    for (std::size_t n = 0; n < records.size(); ++n) {
      auto& r = records[n];
      const references::Exclusion origin{r.source_path, r.span.first, r.span.second};
      r.reference_snippets.clear();
      for (auto& s : references::collect_snippets(r.pseudocode, origin, *it->second, cfg.snippet)) {
        r.reference_snippets.push_back(std::move(s.text));
      }
      total += r.reference_snippets.size();
      extractor::emit_record(r, n, out);
    }
    spdlog::info("refs {}: {} snippets", ids[i], total);
  });
}

void clean(const PipelineConfig& cfg, StageOutcome& outcome) {
  const auto ids = record_ids(cfg);
  outcome.papers = ids.size();
  std::vector<std::string> lines(ids.size());
  for_each_paper(ids, cfg, outcome, [&](std::size_t i) {
    const auto records = extractor::read_records(records_dir(cfg), ids[i]);
    std::size_t kept = 0;
    for (std::size_t n = 0; n < records.size(); ++n) {
      for (const auto& snippet : records[n].reference_snippets) {
        std::string text = cleaner::clean(snippet, cfg.cleaning);
        if (text.empty()) continue;
        ordered_json j = {{"arxiv_id", ids[i]},
                          {"record", n},
                          {"year", records[n].year ? ordered_json(*records[n].year) : ordered_json(nullptr)},
                          {"text", std::move(text)}};
        lines[i] += j.dump() + "\n";
        ++kept;
      }
    }
    spdlog::info("clean {}: {} snippets", ids[i], kept);
  });
  std::string all;
  for (const auto& l : lines) all += l;
  fsutil::write_file_atomic(cfg.output_dir / "snippets.jsonl", all);
}

void cluster(const PipelineConfig& cfg, StageOutcome& outcome) {
  const std::string corpus_text = read_output(cfg, "snippets.jsonl", "clean");
  std::vector<topics::YearSnippet> snippets;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos < corpus_text.size();) {
    std::size_t nl = corpus_text.find('\n', pos);
    if (nl == std::string::npos) nl = corpus_text.size();
    const std::string_view line(corpus_text.data() + pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto& year = j.at("year");
      snippets.push_back({year.is_null() ? std::nullopt : std::optional<int>(year.get<int>()),
                          j.at("text").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error("snippets.jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  outcome.papers = snippets.size();

  topics::ClusterOptions options;
  options.tokenizer = cfg.tokenizer;
  options.thresholds = cfg.tfidf;
  options.lda = cfg.lda;
  options.top_k = cfg.top_words;
  options.min_year = cfg.min_year;
  options.jobs = cfg.jobs;
  const auto result = topics::cluster_by_year(snippets, options);
  for (const auto& w : result.warnings) spdlog::warn("{}", w);
  outcome.warnings.insert(outcome.warnings.end(), result.warnings.begin(), result.warnings.end());

  fsutil::write_file_atomic(cfg.output_dir / "topics.csv", topics::topic_table_csv(result, cfg.top_words));
  const fs::path models = cfg.output_dir / "models";
  reset_dir(models);
  for (const auto& [year, yc] : result.years) {
    fsutil::write_file_atomic(models / (std::to_string(year) + ".json"), topics::model_to_json(yc.model));
    spdlog::info("cluster {}: {} documents, {} terms", year, yc.documents, yc.dtm.vocabulary.size());
  }
}

std::vector<analytics::PaperObservation> observations(const PipelineConfig& cfg) {
  return analytics::parse_observations_csv(read_output(cfg, "detection.csv", "detect"));
}

void stats(const PipelineConfig& cfg, StageOutcome& outcome) {
  const auto obs = observations(cfg);
  outcome.papers = obs.size();
  fsutil::write_file_atomic(cfg.output_dir / "stats.csv", analytics::stats_csv(analytics::compute_stats(obs)));
  fsutil::write_file_atomic(cfg.output_dir / "yearly.csv", analytics::yearly_csv(analytics::yearly_counts(obs)));
  fsutil::write_file_atomic(cfg.output_dir / "categories.csv",
                            analytics::categories_csv(analytics::category_distribution(obs)));
}

void sample(const PipelineConfig& cfg, StageOutcome& outcome) {
  std::vector<std::string> ids;
  for (const auto& o : observations(cfg)) ids.push_back(o.arxiv_id);
  outcome.papers = ids.size();
  std::size_t n = cfg.sample_size;
  if (n > ids.size()) {
    outcome.warnings.push_back("sample size " + std::to_string(n) + " exceeds corpus of " +
                               std::to_string(ids.size()) + "; sampling every paper");
    spdlog::warn("{}", outcome.warnings.back());
    n = ids.size();
  }
  std::string out;
  for (const auto& id : analytics::sample_uniform(std::move(ids), n, cfg.sample_seed)) out += id + "\n";
  fsutil::write_file_atomic(cfg.output_dir / "sample.txt", out);
}

void validate(const PipelineConfig& cfg, StageOutcome& outcome) {
  if (!cfg.labels) throw ConfigError("validation.labels is not set");
  const auto labels = analytics::parse_labels_csv(fsutil::read_file(*cfg.labels));
  outcome.papers = labels.size();

  std::optional<std::vector<analytics::PaperObservation>> obs;
  if (fs::is_regular_file(cfg.output_dir / "detection.csv")) obs = observations(cfg);

  std::map<std::string, bool> predicted;
  if (cfg.predictions) {
    predicted = analytics::parse_predictions_csv(fsutil::read_file(*cfg.predictions));
  } else if (obs) {
    for (const auto& o : *obs) predicted[o.arxiv_id] = o.tag_found;
  } else {
    throw Error("no predictions: set validation.predictions or run 'detect' first");
  }
  const auto report = analytics::compute_confusion(labels, predicted);

  std::optional<analytics::ContingencyTable> table;
  if (obs) {
    std::map<std::string, bool> keywords;
    for (const auto& o : *obs) keywords[o.arxiv_id] = o.has_keywords();
    const bool covered = std::all_of(labels.begin(), labels.end(),
                                     [&](const analytics::ValidationLabel& l) { return keywords.contains(l.arxiv_id); });
    if (covered) {
      table = analytics::indicative_crosscheck(labels, keywords);
    } else {
      outcome.warnings.push_back("labelled papers missing from detection.csv; indicative cross-check skipped");
      spdlog::warn("{}", outcome.warnings.back());
    }
  }
  fsutil::write_file_atomic(cfg.output_dir / "validation.json", analytics::validation_json(report, table));
  spdlog::info("validate: fpr={:.1f}% fnr={:.1f}%", report.fpr_percent(), report.fnr_percent());
}

void write_error_log(const PipelineConfig& cfg, const StageOutcome& outcome) {
  const fs::path path = cfg.output_dir / "errors" / (std::string(stage_name(outcome.stage)) + ".jsonl");
  if (outcome.errors.empty()) {
    std::error_code ec;
    fs::remove(path, ec);
    return;
  }
  std::string out;
  for (const auto& e : outcome.errors) {
    out += ordered_json{{"arxiv_id", e.arxiv_id}, {"stage", stage_name(outcome.stage)}, {"message", e.message}}.dump() +
           "\n";
  }
  fsutil::write_file_atomic(path, out);
}

}  // namespace

const char* stage_name(Stage s) {
  for (const auto& [stage, name] : kStageNames) {
    if (stage == s) return name;
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (const auto& [stage, n] : kStageNames) {
    if (name == n) return stage;
  }
  return std::nullopt;
}

std::vector<Stage> full_run(const PipelineConfig& cfg) {
  std::vector<Stage> stages = {Stage::Ingest, Stage::Detect, Stage::Extract, Stage::Refs,  Stage::Clean,
                               Stage::Cluster, Stage::Stats, Stage::Sample};
  if (cfg.labels) stages.push_back(Stage::Validate);
  return stages;
}

StageOutcome run_stage(Stage stage, const PipelineConfig& cfg) {
  StageOutcome outcome;
  outcome.stage = stage;
  switch (stage) {
    case Stage::Ingest: ingest(cfg, outcome); break;
    case Stage::Detect: detect(cfg, outcome); break;
    case Stage::Extract: extract(cfg, outcome); break;
    case Stage::Refs: refs(cfg, outcome); break;
    case Stage::Clean: clean(cfg, outcome); break;
    case Stage::Cluster: cluster(cfg, outcome); break;
    case Stage::Stats: stats(cfg, outcome); break;
    case Stage::Sample: sample(cfg, outcome); break;
    case Stage::Validate: validate(cfg, outcome); break;
  }
  write_error_log(cfg, outcome);
  return outcome;
}

}  // namespace pseudomine::pipeline
