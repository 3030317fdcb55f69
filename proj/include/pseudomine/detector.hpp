#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudomine/corpus.hpp"

namespace pseudomine::detector {

struct DetectionResult {
  std::string arxiv_id;
  bool latex_tag_found = false;
  std::size_t tag_count = 0;  // outermost balanced algorithm environments
  bool has_latex = false;
};

/// Looks for `\begin{algorithm}` / `\begin{algorithm*}` environments outside
/// comments in every LaTeX file of the bundle. tag_count matches the number
/// of spans the extractor produces for the same bundle.
DetectionResult detect_latex_algorithm(const corpus::PaperBundle& bundle);

enum class KeywordClass { Pseudocode, Algorithm };

const char* keyword_class_name(KeywordClass c);
std::optional<KeywordClass> parse_keyword_class(std::string_view name);

struct KeywordClasses {
  bool pseudocode = true;
  bool algorithm = true;

  bool contains(KeywordClass c) const { return c == KeywordClass::Pseudocode ? pseudocode : algorithm; }
  static KeywordClasses none() { return {false, false}; }
};

struct KeywordHit {
  KeywordClass keyword_class = KeywordClass::Pseudocode;
  std::string matched_text;
  std::size_t file_offset = 0;  // in Unicode scalar values

  bool operator==(const KeywordHit&) const = default;
};

/// Indicative surface forms in extracted PDF text, non-overlapping, in
/// document order:
///   Pseudocode: "Pseudocode", "pseudocode", "Pseudo-code", "pseudo-code"
///   Algorithm:  "Algorithm N", "algorithm N", "Algorithm-N", "algorithm-N",
///               "Algorithm:", "algorithm:"   (N = one or more digits)
std::vector<KeywordHit> detect_indicative_keywords(std::string_view text, KeywordClasses classes = {});

}  // namespace pseudomine::detector
