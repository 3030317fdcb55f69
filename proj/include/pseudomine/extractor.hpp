#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pseudomine/corpus.hpp"

namespace pseudomine::extractor {

/// One outermost algorithm environment. Offsets are Unicode scalar values
/// into the decoded file text; [start_offset, end_offset) covers `raw`.
struct PseudocodeSpan {
  std::string source_path;
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
  std::string body;  // between the delimiters
  std::string raw;   // including the delimiters
  bool starred = false;
  std::size_t nesting_depth_seen = 1;
};

struct Warning {
  std::string source_path;
  std::size_t offset = 0;  // scalar offset, 0 when not positional
  std::string message;
};

struct Extraction {
  std::vector<PseudocodeSpan> spans;
  std::vector<Warning> warnings;
};

/// Spans of one file in document order. Nested algorithm environments stay
/// inside their outermost span; comments are skipped for tag matching but
/// kept in the extracted text.
Extraction extract_pseudocode(std::string_view file_text, std::string_view source_path = {});

/// extract_pseudocode over every LaTeX file of the bundle, files in path order.
Extraction extract_bundle(const corpus::PaperBundle& bundle);

struct SupplementRecord {
  std::string label;
  std::string content;
  std::string environment;  // environment name, or "paragraph"
  std::string source_path;

  bool operator==(const SupplementRecord&) const = default;
};

struct Supplements {
  std::vector<SupplementRecord> records;
  std::vector<Warning> warnings;
};

/// Resolves every `\<seg>ref{L}` in the span body to the content labelled L
/// anywhere in the bundle: the innermost enclosing environment, or the
/// blank-line-delimited paragraph when the label is in running text.
Supplements extract_referenced_content(const PseudocodeSpan& span, const corpus::PaperBundle& bundle);

struct PseudocodeRecord {
  std::string arxiv_id;
  std::optional<int> year;
  std::optional<std::string> title;
  std::optional<std::string> category;
  std::optional<std::string> subcategory;
  std::string pseudocode;
  std::vector<SupplementRecord> supplements;
  std::vector<std::string> reference_snippets;
  std::string source_path;
  std::pair<std::size_t, std::size_t> span{0, 0};
  bool starred = false;

  bool operator==(const PseudocodeRecord&) const = default;
};

PseudocodeRecord make_record(const PseudocodeSpan& span, std::vector<SupplementRecord> supplements,
                             const corpus::PaperMetadata& metadata);

std::string record_to_json(const PseudocodeRecord& record);
PseudocodeRecord record_from_json(std::string_view json_text);

std::filesystem::path record_path(const std::filesystem::path& out_dir, std::string_view arxiv_id,
                                  std::size_t ordinal);

/// Writes `<out_dir>/<arxiv_id>/<ordinal>.json` atomically and returns the path.
std::filesystem::path emit_record(const PseudocodeRecord& record, std::size_t ordinal,
                                  const std::filesystem::path& out_dir);

/// Convenience overload building the record first.
std::filesystem::path emit_record(const PseudocodeSpan& span, std::vector<SupplementRecord> supplements,
                                  const corpus::PaperMetadata& metadata, std::size_t ordinal,
                                  const std::filesystem::path& out_dir);

/// Reads back all records of one paper in ordinal order.
std::vector<PseudocodeRecord> read_records(const std::filesystem::path& out_dir, std::string_view arxiv_id);

}  // namespace pseudomine::extractor
