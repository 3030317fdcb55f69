#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudomine/config.hpp"

namespace pseudomine::pipeline {

enum class Stage { Ingest, Detect, Extract, Refs, Clean, Cluster, Stats, Sample, Validate };

const char* stage_name(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

/// Stages `all` runs, in order. Validate is included only when labels are configured.
std::vector<Stage> full_run(const PipelineConfig& cfg);

struct PaperError {
  std::string arxiv_id;
  std::string message;
};

struct StageOutcome {
  Stage stage = Stage::Ingest;
  std::size_t papers = 0;
  std::vector<PaperError> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

/// Output layout under cfg.output_dir:
///   manifest.json, unmatched.csv          ingest
///   detection.csv, keyword_hits.csv       detect
///   records/<id>/<n>.json                 extract, refs
///   snippets.jsonl                        clean
///   topics.csv, models/<year>.json        cluster
///   stats.csv, yearly.csv, categories.csv stats
///   sample.txt                            sample
///   validation.json                       validate
///   errors/<stage>.jsonl                  any stage with per-paper failures
///
/// Stage-level failures (bad layout, missing inputs) throw pseudomine::Error;
/// per-paper failures are collected in the outcome and written to the error log.
StageOutcome run_stage(Stage stage, const PipelineConfig& cfg);

}  // namespace pseudomine::pipeline
