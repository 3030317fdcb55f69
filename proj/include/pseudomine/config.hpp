#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pseudomine/archive.hpp"
#include "pseudomine/cleaner.hpp"
#include "pseudomine/detector.hpp"
#include "pseudomine/references.hpp"
#include "pseudomine/topics.hpp"

namespace pseudomine {

/// Everything a pipeline run needs. Defaults carry the published constants:
/// 1200/300-character snippets, 85% / 0.02% document-frequency cut-offs,
/// ten topics with five words each, years from 2010 on.
struct PipelineConfig {
  std::filesystem::path corpus_root;
  std::filesystem::path output_dir = "out";
  int max_archive_depth = archive::kDefaultMaxDepth;

  detector::KeywordClasses keyword_classes;
  references::SnippetConfig snippet;
  cleaner::CleaningRules cleaning;
  topics::TokenizerConfig tokenizer;
  topics::DfThresholds tfidf;
  topics::LdaParams lda{.num_topics = 10, .seed = 20231, .alpha = std::nullopt, .beta = 0.01, .iterations = 1000};
  std::size_t top_words = 5;
  int min_year = 2010;

  std::size_t sample_size = 1000;
  std::uint64_t sample_seed = 20231;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> predictions;

  unsigned jobs = 1;

  /// Throws ConfigError on any non-positive or inconsistent value.
  void validate() const;
};

/// Reads a JSON config. Relative paths resolve against `base_dir`. Unknown
/// keys are rejected so typos do not silently fall back to defaults.
PipelineConfig config_from_json(std::string_view json_text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// The effective configuration as JSON (stop-word list omitted when it is
/// the built-in one).
std::string config_to_json(const PipelineConfig& cfg);

}  // namespace pseudomine
