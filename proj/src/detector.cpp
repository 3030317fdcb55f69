#include "pseudomine/detector.hpp"

#include <array>

#include "pseudomine/latex.hpp"
#include "pseudomine/text.hpp"

namespace pseudomine::detector {

DetectionResult detect_latex_algorithm(const corpus::PaperBundle& bundle) {
  DetectionResult r;
  r.arxiv_id = bundle.id();
  r.has_latex = bundle.has_latex;
  for (const auto& file : bundle.latex_files) {
    r.tag_count += latex::scan_algorithm_environments(file.text).environments.size();
  }
  r.latex_tag_found = r.tag_count > 0;
  return r;
}

const char* keyword_class_name(KeywordClass c) {
  return c == KeywordClass::Pseudocode ? "Pseudocode" : "Algorithm";
}

std::optional<KeywordClass> parse_keyword_class(std::string_view name) {
  if (name == "Pseudocode") return KeywordClass::Pseudocode;
  if (name == "Algorithm") return KeywordClass::Algorithm;
  return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, 4> kPseudocodeForms = {"Pseudocode", "pseudocode", "Pseudo-code",
                                                              "pseudo-code"};

// Length in bytes of an Algorithm-class hit starting at `pos`, or 0.
std::size_t match_algorithm_form(std::string_view text, std::size_t pos) {
  std::string_view rest = text.substr(pos);
  if (!rest.starts_with("Algorithm") && !rest.starts_with("algorithm")) return 0;
  std::size_t i = 9;
  if (i >= rest.size()) return 0;
  if (rest[i] == ':') return i + 1;
  if (rest[i] != ' ' && rest[i] != '-') return 0;
  std::size_t j = i + 1;
  while (j < rest.size() && text::is_ascii_digit(rest[j])) ++j;
  return j > i + 1 ? j : 0;
}

std::size_t match_pseudocode_form(std::string_view text, std::size_t pos) {
  std::string_view rest = text.substr(pos);
  for (auto form : kPseudocodeForms) {
    if (rest.starts_with(form)) return form.size();
  }
  return 0;
}

}  // namespace

std::vector<KeywordHit> detect_indicative_keywords(std::string_view text, KeywordClasses classes) {
  std::vector<KeywordHit> hits;
  if (!classes.pseudocode && !classes.algorithm) return hits;

  std::size_t scalar = 0;  // scalar offset of `pos`
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == 'P' || c == 'p' || c == 'A' || c == 'a') {
      std::size_t len = 0;
      KeywordClass cls = KeywordClass::Pseudocode;
      if (classes.pseudocode && (c == 'P' || c == 'p')) {
        len = match_pseudocode_form(text, pos);
      } else if (classes.algorithm && (c == 'A' || c == 'a')) {
        len = match_algorithm_form(text, pos);
        cls = KeywordClass::Algorithm;
      }
      if (len > 0) {
        hits.push_back({cls, std::string(text.substr(pos, len)), scalar});
        pos += len;
        scalar += len;  // every surface form is ASCII
        continue;
      }
    }
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++scalar;
    ++pos;
  }
  return hits;
}

}  // namespace pseudomine::detector
