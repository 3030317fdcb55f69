#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pseudomine/corpus.hpp"

namespace pseudomine::references {

/// Window geometry for reference snippets, in Unicode scalar values.
struct SnippetConfig {
  std::size_t span_chars = 1200;
  std::size_t boundary_window = 300;
  std::u32string sentence_terminators = U".!?";

  /// Throws ConfigError unless 0 < boundary_window <= span_chars.
  void validate() const;
};

struct ReferenceSnippet {
  std::string text;
  std::string source_path;
  std::size_t tag_offset = 0;
  bool trimmed_left = false;
  bool trimmed_right = false;

  bool operator==(const ReferenceSnippet&) const = default;
};

/// Labels defined by `\label{...}` in a pseudocode body, trimmed, in order,
/// duplicates kept.
std::vector<std::string> find_labels(std::string_view body);

struct TextMatch {
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// Recognises `\<seg>ref{label}` for any alphabetic (possibly empty) segment,
/// with optional whitespace inside the braces. The label is compared
/// literally, so regex metacharacters need no escaping.
class RefMatcher {
 public:
  explicit RefMatcher(std::string label);

  const std::string& label() const { return label_; }

  /// True when the whole of `candidate` is one reference to the label.
  bool matches(std::string_view candidate) const;

  /// Byte-offset matches in `text`, ascending.
  std::vector<TextMatch> find_all(std::string_view text) const;

 private:
  std::string label_;
};

RefMatcher generate_ref_patterns(std::string_view label);

struct ReferenceLocation {
  std::string source_path;
  std::size_t offset = 0;  // scalar values
  std::size_t length = 0;  // scalar values

  bool operator==(const ReferenceLocation&) const = default;
};

/// Source region that must not contribute matches (the pseudocode itself).
struct Exclusion {
  std::string source_path;
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
};

/// Every reference to the matcher's label across the bundle's files, in
/// (path, offset) order, minus matches inside `exclude`.
std::vector<ReferenceLocation> locate_references(const RefMatcher& matcher, const corpus::PaperBundle& bundle,
                                                 const Exclusion* exclude = nullptr);

/// Cuts the prose around one reference.
///
/// The candidate window reaches span_chars before and after the match,
/// clipped to the text. Within the first boundary_window characters of the
/// window the snippet starts after the last sentence terminator (skipping
/// the whitespace that follows it); within the last boundary_window
/// characters it ends at the first terminator, inclusive. A terminator only
/// counts when followed by whitespace, `}` or `)`, or when it is the last
/// character of the window. Boundary scans never enter the match itself.
ReferenceSnippet extract_snippet(std::u32string_view text, TextMatch match, const SnippetConfig& cfg);

/// Snippets for every reference to every label defined in the span's body.
std::vector<ReferenceSnippet> collect_snippets(std::string_view pseudocode_body, const Exclusion& origin,
                                               const corpus::PaperBundle& bundle, const SnippetConfig& cfg);

}  // namespace pseudomine::references
