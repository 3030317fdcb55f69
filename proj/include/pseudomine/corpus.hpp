#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudomine/text.hpp"

namespace pseudomine::corpus {

struct PaperMetadata {
  std::string arxiv_id;
  std::optional<int> version;
  std::optional<int> year;
  std::optional<std::string> title;
  std::optional<std::string> abstract;
  std::optional<std::string> category;
  std::optional<std::string> subcategory;
  std::optional<std::string> source_url;

  bool operator==(const PaperMetadata&) const = default;
};

struct SourceFile {
  std::string path;  // relative to the paper's source directory
  std::string text;  // decoded, UTF-8
  text::Encoding encoding = text::Encoding::Utf8;
};

struct PaperBundle {
  PaperMetadata metadata;
  std::vector<SourceFile> latex_files;  // unique paths, sorted
  std::optional<std::string> pdf_text;
  bool has_latex = false;

  const std::string& id() const { return metadata.arxiv_id; }
  const SourceFile* find_file(std::string_view path) const;
};

constexpr int kFirstArxivYear = 1991;

/// Parses a metadata sidecar. Only `id` is mandatory (MetadataError when it
/// is missing). Malformed optional fields are left absent and reported
/// through `warnings`.
PaperMetadata parse_metadata_json(std::string_view json_text, std::vector<std::string>* warnings = nullptr);
PaperMetadata parse_metadata(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

struct UnmatchedReport {
  std::vector<std::string> pdf_only;
  std::vector<std::string> source_only;
  std::vector<std::string> metadata_only;
};

struct PairingResult {
  std::vector<PaperBundle> bundles;  // sorted by identifier
  UnmatchedReport unmatched;
  std::vector<std::string> warnings;
};

/// Builds one bundle per identifier found as `<pdf_text_dir>/<id>.txt` or
/// `<source_dir>/<id>/`. Metadata is read from `<meta_dir>/<id>.json` when
/// that directory is given and the file exists.
PairingResult pair_by_identifier(const std::filesystem::path& pdf_text_dir,
                                 const std::filesystem::path& source_dir,
                                 const std::filesystem::path& meta_dir = {},
                                 unsigned jobs = 1);

/// pair_by_identifier over the standard `pdf_text/`, `sources/`, `meta/` layout.
PairingResult load_corpus(const std::filesystem::path& root, unsigned jobs = 1);

/// Loads the *.tex and *.bbl files under one paper's source directory.
std::vector<SourceFile> load_sources(const std::filesystem::path& dir);

}  // namespace pseudomine::corpus
