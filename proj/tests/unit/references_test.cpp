#include "pseudomine/references.hpp"

#include <gtest/gtest.h>

#include <random>

#include "pseudomine/error.hpp"
#include "pseudomine/text.hpp"
#include "../support/oracles.hpp"

namespace pseudomine {
namespace {

using references::extract_snippet;
using references::SnippetConfig;

TEST(FindLabels, TrimsAndKeepsDuplicates) {
  EXPECT_EQ(references::find_labels("\\label{alg:main}"), std::vector<std::string>{"alg:main"});
  EXPECT_EQ(references::find_labels("\\label{ alg:x }"), std::vector<std::string>{"alg:x"});
  EXPECT_EQ(references::find_labels("\\label{a}\\label{a}"), (std::vector<std::string>{"a", "a"}));
  EXPECT_TRUE(references::find_labels("no labels here").empty());
}

TEST(RefMatcher, AnyAlphabeticPrefix) {
  const auto m = references::generate_ref_patterns("alg:main");
  for (const char* s : {"\\ref{alg:main}", "\\algref{alg:main}", "\\eqref{alg:main}", "\\Cref{alg:main}",
                        "\\autoref{ alg:main }"}) {
    EXPECT_TRUE(m.matches(s)) << s;
  }
  EXPECT_FALSE(m.matches("\\ref{alg:main2}"));
  EXPECT_FALSE(m.matches("\\label{alg:main}"));
  EXPECT_FALSE(m.matches("\\ref{alg:main} "));
}

TEST(RefMatcher, LabelIsLiteral) {
  const auto m = references::generate_ref_patterns("alg:a+b");
  EXPECT_TRUE(m.matches("\\ref{alg:a+b}"));
  EXPECT_FALSE(m.matches("\\ref{alg:aab}"));
  const auto dots = references::generate_ref_patterns("a.c");
  EXPECT_FALSE(dots.matches("\\ref{abc}"));
}

TEST(RefMatcher, FindAllAscending) {
  const auto m = references::generate_ref_patterns("x");
  const auto hits = m.find_all("\\ref{x} and \\ref{y} and \\cref{x}");
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].offset, 0u);
  EXPECT_EQ(hits[0].length, 7u);
  EXPECT_EQ(hits[1].offset, 24u);
}

corpus::PaperBundle bundle() {
  corpus::PaperBundle b;
  b.latex_files = {
      {"a.tex", "\\begin{algorithm}\\label{alg:1}see \\ref{alg:1}\\end{algorithm} \xc3\xa9 \\ref{alg:1}."},
      {"b.tex", "Other file \\cref{alg:1} here."},
  };
  return b;
}

TEST(Locate, AcrossFilesWithExclusion) {
  const auto b = bundle();
  const auto m = references::generate_ref_patterns("alg:1");
  const auto all = references::locate_references(m, b);
  ASSERT_EQ(all.size(), 3u);
  const references::Exclusion origin{"a.tex", 0, 60};
  const auto outside = references::locate_references(m, b, &origin);
  ASSERT_EQ(outside.size(), 2u);
  EXPECT_EQ(outside[0].source_path, "a.tex");
  EXPECT_EQ(outside[0].offset, 63u);  // scalar offset past the two-byte character
  EXPECT_EQ(outside[1].source_path, "b.tex");
  EXPECT_TRUE(references::locate_references(references::generate_ref_patterns("zzz"), b).empty());
}

TEST(Snippet, HandTracedExample) {
  const std::u32string text = U"abcd. efghij REF klmno. pqrst";
  const SnippetConfig cfg{10, 5, U".!?"};
  const auto s = extract_snippet(text, {13, 3}, cfg);
  EXPECT_EQ(s.text, "efghij REF klmno.");
  EXPECT_TRUE(s.trimmed_left);
  EXPECT_TRUE(s.trimmed_right);
}

TEST(Snippet, NoTerminatorKeepsWindow) {
  const std::u32string text(50, U'a');
  const auto s = extract_snippet(text, {20, 3}, SnippetConfig{10, 5, U".!?"});
  EXPECT_EQ(s.text, std::string(23, 'a'));
  EXPECT_FALSE(s.trimmed_left);
  EXPECT_FALSE(s.trimmed_right);
}

TEST(Snippet, ClippedAtFileStart) {
  const std::u32string text = U"REF then more words";
  const auto s = extract_snippet(text, {0, 3}, SnippetConfig{10, 5, U".!?"});
  EXPECT_EQ(s.text, "REF then more");
  EXPECT_EQ(s.tag_offset, 0u);
}

TEST(Snippet, DecimalPointIsNotATerminator) {
  const std::u32string text = U"value 3.14 REF x";
  const auto s = extract_snippet(text, {11, 3}, SnippetConfig{20, 10, U".!?"});
  EXPECT_FALSE(s.trimmed_left);
  EXPECT_EQ(s.text, "value 3.14 REF x");
}

TEST(SnippetConfig, Validation) {
  EXPECT_NO_THROW((SnippetConfig{}.validate()));
  EXPECT_THROW((SnippetConfig{10, 11, U"."}.validate()), ConfigError);
  EXPECT_THROW((SnippetConfig{10, 0, U"."}.validate()), ConfigError);
}

// Random prose with terminators in awkward places, compared against the
// naive reference implementation.
TEST(SnippetProperty, AgreesWithOracle) {
  std::mt19937_64 rng(4242);
  const std::u32string alphabet = U"ab .!?})\né数";
  std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 400)(rng);
    std::u32string text;
    for (std::size_t i = 0; i < n; ++i) text.push_back(alphabet[letter(rng)]);
    const std::size_t off = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(12, n - off))(rng);
    const std::size_t span = std::uniform_int_distribution<std::size_t>(1, 120)(rng);
    const std::size_t bw = std::uniform_int_distribution<std::size_t>(1, span)(rng);
    const SnippetConfig cfg{span, bw, U".!?"};

    const auto got = extract_snippet(text, {off, len}, cfg);
    const auto want = oracle::snippet(text, off, len, span, bw, U".!?");
    ASSERT_EQ(got.text, text::to_utf8(want.text)) << "trial " << trial;
    EXPECT_EQ(got.trimmed_left, want.trimmed_left);
    EXPECT_EQ(got.trimmed_right, want.trimmed_right);
    EXPECT_LE(text::scalar_count(got.text), 2 * span + len);
    EXPECT_NE(got.text.find(text::to_utf8(text.substr(off, len))), std::string::npos);
  }
}

TEST(CollectSnippets, OneSnippetPerOutsideReference) {
  const auto b = bundle();
  const std::string body = "\\label{alg:1}see \\ref{alg:1}";
  const auto snippets = references::collect_snippets(body, {"a.tex", 0, 60}, b, SnippetConfig{});
  ASSERT_EQ(snippets.size(), 2u);
  EXPECT_EQ(snippets[1].source_path, "b.tex");
  EXPECT_EQ(snippets[1].text, "Other file \\cref{alg:1} here.");
}

}  // namespace
}  // namespace pseudomine
