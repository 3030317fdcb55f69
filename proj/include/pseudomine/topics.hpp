#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pseudomine/error.hpp"
#include "pseudomine/stemmer.hpp"

namespace pseudomine::topics {

const std::set<std::string>& english_stopwords();
const std::set<std::string>& default_non_instructive();

struct TokenizerConfig {
  std::set<std::string> stopwords = english_stopwords();
  std::set<std::string> non_instructive = default_non_instructive();
  std::size_t min_token_length = 2;
};

using Tokens = std::vector<std::string>;

/// Lowercase alphabetic runs, minus stop and non-instructive words, Porter
/// stemmed, minus stems shorter than min_token_length.
Tokens tokenize_and_filter(std::string_view text, const TokenizerConfig& cfg = {});

/// Document-frequency retention band: a term is kept when
/// min_df <= df/N <= max_df.
struct DfThresholds {
  double max_df = 0.85;
  double min_df = 0.0002;
};

class EmptyVocabularyError : public Error {
 public:
  using Error::Error;
};

template <class T>
using SparseRow = std::vector<std::pair<std::uint32_t, T>>;  // sorted by term index

struct DocumentTermMatrix {
  std::vector<std::string> vocabulary;  // sorted
  std::vector<std::string> doc_ids;
  std::vector<SparseRow<double>> weights;        // TF-IDF, rows L2-normalised
  std::vector<SparseRow<std::uint32_t>> counts;  // raw counts over the vocabulary
  std::vector<std::size_t> doc_freq;             // per vocabulary term

  std::size_t num_docs() const { return doc_ids.size(); }
  double weight(std::size_t doc, std::size_t term) const;
};

/// weight(d,t) = tf(d,t) * (ln((1+N)/(1+df(t))) + 1), each row then scaled to
/// unit Euclidean norm (all-zero rows stay zero). Throws EmptyVocabularyError
/// when no term survives the thresholds.
DocumentTermMatrix build_dtm(const std::vector<Tokens>& docs, const DfThresholds& thresholds = {},
                             std::vector<std::string> doc_ids = {});

struct LdaParams {
  std::size_t num_topics = 10;
  std::uint64_t seed = 0;
  std::optional<double> alpha;  // defaults to 50 / num_topics
  double beta = 0.01;
  std::size_t iterations = 1000;

  double effective_alpha() const { return alpha ? *alpha : 50.0 / static_cast<double>(num_topics); }
};

struct TopicModel {
  std::size_t num_topics = 0;
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> topic_word;  // K x V
  std::vector<std::vector<double>> doc_topic;   // D x K
  std::uint64_t seed = 0;
  double alpha = 0;
  double beta = 0;
  std::size_t iterations = 0;
};

/// Collapsed Gibbs sampling over raw term counts. Single-threaded and
/// bit-reproducible for identical inputs and parameters.
TopicModel fit_lda(const std::vector<std::string>& vocabulary, const std::vector<SparseRow<std::uint32_t>>& counts,
                   const LdaParams& params, std::vector<std::string>* warnings = nullptr);
TopicModel fit_lda(const DocumentTermMatrix& dtm, const LdaParams& params,
                   std::vector<std::string>* warnings = nullptr);

/// The k most probable terms of each topic, ties broken alphabetically.
std::vector<std::vector<std::string>> top_words(const TopicModel& model, std::size_t k = 5);

struct YearSnippet {
  std::optional<int> year;
  std::string text;  // cleaned
};

struct ClusterOptions {
  TokenizerConfig tokenizer;
  DfThresholds thresholds;
  LdaParams lda;
  std::size_t top_k = 5;
  int min_year = 2010;
  unsigned jobs = 1;
};

struct YearClusters {
  int year = 0;
  std::size_t documents = 0;
  DocumentTermMatrix dtm;
  TopicModel model;
  std::vector<std::vector<std::string>> top;
};

struct ClusterResult {
  std::map<int, YearClusters> years;
  std::vector<std::string> warnings;
};

/// One independent topic model per year >= min_year. Years with fewer
/// documents than topics, or with an empty vocabulary, are skipped with a
/// warning.
ClusterResult cluster_by_year(const std::vector<YearSnippet>& snippets, const ClusterOptions& options = {});

/// `year,cluster,word1,...,wordK` rows.
std::string topic_table_csv(const ClusterResult& result, std::size_t top_k = 5);

std::string model_to_json(const TopicModel& model);

}  // namespace pseudomine::topics
