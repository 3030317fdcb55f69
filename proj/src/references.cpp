#include "pseudomine/references.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pseudomine/error.hpp"
#include "pseudomine/latex.hpp"
#include "pseudomine/text.hpp"

namespace pseudomine::references {

void SnippetConfig::validate() const {
  if (span_chars == 0) throw ConfigError("snippet span_chars must be positive");
  if (boundary_window == 0) throw ConfigError("snippet boundary_window must be positive");
  if (boundary_window > span_chars) throw ConfigError("snippet boundary_window must not exceed span_chars");
  if (sentence_terminators.empty()) throw ConfigError("snippet sentence_terminators must not be empty");
}

std::vector<std::string> find_labels(std::string_view body) {
  std::vector<std::string> out;
  for (const auto& lc : latex::label_commands(body)) {
    if (!lc.label.empty()) out.emplace_back(lc.label);
  }
  return out;
}

RefMatcher::RefMatcher(std::string label) : label_(std::move(label)) {
  if (label_.empty()) throw Error("reference label must not be empty");
}

bool RefMatcher::matches(std::string_view candidate) const {
  auto found = find_all(candidate);
  return found.size() == 1 && found[0].offset == 0 && found[0].length == candidate.size();
}

std::vector<TextMatch> RefMatcher::find_all(std::string_view text) const {
  std::vector<TextMatch> out;
  for (const auto& rc : latex::ref_commands(text)) {
    if (rc.target == label_) out.push_back({rc.pos, rc.end - rc.pos});
  }
  return out;
}

RefMatcher generate_ref_patterns(std::string_view label) { return RefMatcher(std::string(text::trim(label))); }

std::vector<ReferenceLocation> locate_references(const RefMatcher& matcher, const corpus::PaperBundle& bundle,
                                                 const Exclusion* exclude) {
  std::vector<ReferenceLocation> out;
  for (const auto& file : bundle.latex_files) {
    const auto matches = matcher.find_all(file.text);
    if (matches.empty()) continue;
    const text::OffsetMap offsets(file.text);
    for (const auto& m : matches) {
      const std::size_t start = offsets.to_scalar(m.offset);
      const std::size_t end = offsets.to_scalar(m.offset + m.length);
      if (exclude && exclude->source_path == file.path && start >= exclude->start_offset &&
          end <= exclude->end_offset) {
        continue;
      }
      out.push_back({file.path, start, end - start});
    }
  }
  return out;
}

namespace {

bool is_u32_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v';
}

}  // namespace

ReferenceSnippet extract_snippet(std::u32string_view text, TextMatch match, const SnippetConfig& cfg) {
  const std::size_t n = text.size();
  const std::size_t match_begin = std::min(match.offset, n);
  const std::size_t match_end = std::min(match.offset + match.length, n);
  const std::size_t window_begin = match_begin > cfg.span_chars ? match_begin - cfg.span_chars : 0;
  const std::size_t window_end = std::min(n, match_end + cfg.span_chars);

  auto terminates = [&](std::size_t p) {
    if (cfg.sentence_terminators.find(text[p]) == std::u32string::npos) return false;
    if (p + 1 >= window_end) return true;
    const char32_t next = text[p + 1];
    return is_u32_space(next) || next == U'}' || next == U')';
  };

  ReferenceSnippet s;
  s.tag_offset = match_begin;

  std::size_t begin = window_begin;
  const std::size_t left_limit = std::min(window_begin + cfg.boundary_window, match_begin);
  for (std::size_t p = left_limit; p-- > window_begin;) {
    if (terminates(p)) {
      begin = p + 1;
      while (begin < match_begin && is_u32_space(text[begin])) ++begin;
      s.trimmed_left = true;
      break;
    }
  }

  std::size_t end = window_end;
  const std::size_t right_start =
      std::max(window_end > cfg.boundary_window ? window_end - cfg.boundary_window : 0, match_end);
  for (std::size_t p = right_start; p < window_end; ++p) {
    if (terminates(p)) {
      end = p + 1;
      s.trimmed_right = true;
      break;
    }
  }

  s.text = text::to_utf8(text.substr(begin, end - begin));
  return s;
}

std::vector<ReferenceSnippet> collect_snippets(std::string_view pseudocode_body, const Exclusion& origin,
                                               const corpus::PaperBundle& bundle, const SnippetConfig& cfg) {
  std::vector<ReferenceSnippet> out;
  std::set<std::string> seen;
  std::map<std::string, std::u32string> decoded;
  for (const auto& label : find_labels(pseudocode_body)) {
    if (!seen.insert(label).second) continue;
    const RefMatcher matcher = generate_ref_patterns(label);
    for (const auto& loc : locate_references(matcher, bundle, &origin)) {
      auto [it, fresh] = decoded.try_emplace(loc.source_path);
      if (fresh) it->second = text::to_u32(bundle.find_file(loc.source_path)->text);
      ReferenceSnippet s = extract_snippet(it->second, {loc.offset, loc.length}, cfg);
      s.source_path = loc.source_path;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace pseudomine::references
