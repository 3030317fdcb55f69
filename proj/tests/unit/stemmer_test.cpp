#include "pseudomine/stemmer.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace pseudomine {
namespace {

using topics::porter_stem;

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("generalization"), "gener");
  EXPECT_EQ(porter_stem("decoding"), "decod");
  EXPECT_EQ(porter_stem("decoded"), "decod");
  EXPECT_EQ(porter_stem("decode"), "decod");
  EXPECT_EQ(porter_stem("edge"), "edg");
  EXPECT_EQ(porter_stem("as"), "as");
  EXPECT_EQ(porter_stem(""), "");
}

TEST(Porter, ReferenceReleaseRules) {
  EXPECT_EQ(porter_stem("possibli"), "possibl");
  EXPECT_EQ(porter_stem("analogi"), "analog");
}

// Vectors produced by tests/fixtures/generate_porter_vectors.py.
TEST(Porter, MatchesReferenceVectors) {
  std::ifstream in(PSEUDOMINE_TEST_DATA_DIR "/porter_vectors.tsv");
  ASSERT_TRUE(in) << "missing porter_vectors.tsv";
  std::string line;
  std::size_t checked = 0, wrong = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos);
    const std::string word = line.substr(0, tab), stem = line.substr(tab + 1);
    if (porter_stem(word) != stem) {
      ++wrong;
      ADD_FAILURE() << word << ": got " << porter_stem(word) << ", want " << stem;
      if (wrong > 20) break;
    }
    ++checked;
  }
  EXPECT_GT(checked, 3000u);
  EXPECT_EQ(wrong, 0u);
}

}  // namespace
}  // namespace pseudomine
