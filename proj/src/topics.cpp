#include "pseudomine/topics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "pseudomine/parallel.hpp"
#include "pseudomine/text.hpp"

namespace pseudomine::topics {

const std::set<std::string>& english_stopwords() {
  // The common 318-word English list used by mainstream text toolkits.
  static const std::set<std::string> words = {
    "a", "about", "above", "across", "after", "afterwards", "again", "against", "all", "almost",
    "alone", "along", "already", "also", "although", "always", "am", "among", "amongst", "amoungst",
    "amount", "an", "and", "another", "any", "anyhow", "anyone", "anything", "anyway", "anywhere",
    "are", "around", "as", "at", "back", "be", "became", "because", "become", "becomes", "becoming",
    "been", "before", "beforehand", "behind", "being", "below", "beside", "besides", "between",
    "beyond", "bill", "both", "bottom", "but", "by", "call", "can", "cannot", "cant", "co", "con",
    "could", "couldnt", "cry", "de", "describe", "detail", "do", "done", "down", "due", "during",
    "each", "eg", "eight", "either", "eleven", "else", "elsewhere", "empty", "enough", "etc",
    "even", "ever", "every", "everyone", "everything", "everywhere", "except", "few", "fifteen",
    "fifty", "fill", "find", "fire", "first", "five", "for", "former", "formerly", "forty", "found",
    "four", "from", "front", "full", "further", "get", "give", "go", "had", "has", "hasnt", "have",
    "he", "hence", "her", "here", "hereafter", "hereby", "herein", "hereupon", "hers", "herself",
    "him", "himself", "his", "how", "however", "hundred", "i", "ie", "if", "in", "inc", "indeed",
    "interest", "into", "is", "it", "its", "itself", "keep", "last", "latter", "latterly", "least",
    "less", "ltd", "made", "many", "may", "me", "meanwhile", "might", "mill", "mine", "more",
    "moreover", "most", "mostly", "move", "much", "must", "my", "myself", "name", "namely",
    "neither", "never", "nevertheless", "next", "nine", "no", "nobody", "none", "noone", "nor",
    "not", "nothing", "now", "nowhere", "of", "off", "often", "on", "once", "one", "only", "onto",
    "or", "other", "others", "otherwise", "our", "ours", "ourselves", "out", "over", "own", "part",
    "per", "perhaps", "please", "put", "rather", "re", "same", "see", "seem", "seemed", "seeming",
    "seems", "serious", "several", "she", "should", "show", "side", "since", "sincere", "six",
    "sixty", "so", "some", "somehow", "someone", "something", "sometime", "sometimes", "somewhere",
    "still", "such", "system", "take", "ten", "than", "that", "the", "their", "them", "themselves",
    "then", "thence", "there", "thereafter", "thereby", "therefore", "therein", "thereupon",
    "these", "they", "thick", "thin", "third", "this", "those", "though", "three", "through",
    "throughout", "thru", "thus", "to", "together", "too", "top", "toward", "towards", "twelve",
    "twenty", "two", "un", "under", "until", "up", "upon", "us", "very", "via", "was", "we", "well",
    "were", "what", "whatever", "when", "whence", "whenever", "where", "whereafter", "whereas",
    "whereby", "wherein", "whereupon", "wherever", "whether", "which", "while", "whither", "who",
    "whoever", "whole", "whom", "whose", "why", "will", "with", "within", "without", "would", "yet",
    "you", "your", "yours", "yourself", "yourselves",
  };
  return words;
}

const std::set<std::string>& default_non_instructive() {
  static const std::set<std::string> words = {
      "use",    "uses",    "used",     "using",     "employ",    "employs",
      "employed", "employing", "indicate", "indicates", "indicated", "indicating",
  };
  return words;
}

Tokens tokenize_and_filter(std::string_view input, const TokenizerConfig& cfg) {
  Tokens out;
  std::size_t i = 0;
  while (i < input.size()) {
    if (!text::is_ascii_alpha(input[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < input.size() && text::is_ascii_alpha(input[j])) ++j;
    const std::string word = text::to_lower_ascii(input.substr(i, j - i));
    i = j;
    if (cfg.stopwords.contains(word) || cfg.non_instructive.contains(word)) continue;
    std::string stem = porter_stem(word);
    if (stem.size() < cfg.min_token_length) continue;
    out.push_back(std::move(stem));
  }
  return out;
}

double DocumentTermMatrix::weight(std::size_t doc, std::size_t term) const {
  const auto& row = weights.at(doc);
  auto it = std::lower_bound(row.begin(), row.end(), term,
                             [](const auto& e, std::size_t t) { return e.first < t; });
  return it != row.end() && it->first == term ? it->second : 0.0;
}

DocumentTermMatrix build_dtm(const std::vector<Tokens>& docs, const DfThresholds& thresholds,
                             std::vector<std::string> doc_ids) {
  if (docs.empty()) throw Error("build_dtm needs at least one document");
  if (doc_ids.empty()) {
    for (std::size_t d = 0; d < docs.size(); ++d) doc_ids.push_back(std::to_string(d));
  }
  if (doc_ids.size() != docs.size()) throw Error("build_dtm: doc_ids and docs differ in length");

  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::set<std::string_view> distinct(doc.begin(), doc.end());
    for (auto term : distinct) ++df[std::string(term)];
  }

  const double n = static_cast<double>(docs.size());
  DocumentTermMatrix m;
  m.doc_ids = std::move(doc_ids);
  std::unordered_map<std::string, std::uint32_t> index;
  for (const auto& [term, count] : df) {
    const double frac = static_cast<double>(count) / n;
    if (frac > thresholds.max_df || frac < thresholds.min_df) continue;
    index.emplace(term, static_cast<std::uint32_t>(m.vocabulary.size()));
    m.vocabulary.push_back(term);
    m.doc_freq.push_back(count);
  }
  if (m.vocabulary.empty()) {
    throw EmptyVocabularyError("no term has a document frequency within [min_df, max_df]; adjust the thresholds");
  }

  std::vector<double> idf(m.vocabulary.size());
  for (std::size_t t = 0; t < idf.size(); ++t) {
    idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(m.doc_freq[t]))) + 1.0;
  }

  m.weights.resize(docs.size());
  m.counts.resize(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::map<std::uint32_t, std::uint32_t> tf;
    for (const auto& tok : docs[d]) {
      if (auto it = index.find(tok); it != index.end()) ++tf[it->second];
    }
    auto& counts = m.counts[d];
    auto& row = m.weights[d];
    double norm2 = 0;
    for (const auto& [t, c] : tf) {
      counts.emplace_back(t, c);
      const double w = static_cast<double>(c) * idf[t];
      row.emplace_back(t, w);
      norm2 += w * w;
    }
    if (norm2 > 0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& e : row) e.second *= inv;
    }
  }
  return m;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

TopicModel fit_lda(const std::vector<std::string>& vocabulary, const std::vector<SparseRow<std::uint32_t>>& counts,
                   const LdaParams& params, std::vector<std::string>* warnings) {
  const std::size_t K = params.num_topics;
  if (K < 2) throw Error("LDA needs at least 2 topics");
  if (counts.empty()) throw Error("LDA needs a non-empty corpus");
  if (vocabulary.empty()) throw Error("LDA needs a non-empty vocabulary");
  if (params.beta <= 0 || params.effective_alpha() <= 0) throw Error("LDA priors must be positive");
  if (K > counts.size() && warnings) {
    warnings->push_back("LDA: " + std::to_string(K) + " topics for only " + std::to_string(counts.size()) +
                        " documents");
  }

  const std::size_t D = counts.size();
  const std::size_t V = vocabulary.size();
  const double alpha = params.effective_alpha();
  const double beta = params.beta;
  const double vbeta = static_cast<double>(V) * beta;

  // Token streams: one entry per occurrence, terms in row order.
  std::vector<std::vector<std::uint32_t>> words(D);
  std::vector<std::vector<std::uint32_t>> topic(D);
  std::vector<std::uint32_t> doc_topic_n(D * K, 0);
  std::vector<std::uint32_t> topic_word_n(K * V, 0);
  std::vector<std::uint32_t> topic_n(K, 0);

  std::mt19937_64 rng(params.seed);
  for (std::size_t d = 0; d < D; ++d) {
    for (const auto& [term, c] : counts[d]) {
      if (term >= V) throw Error("LDA: term index out of range");
      words[d].insert(words[d].end(), c, term);
    }
    topic[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const auto k = std::min<std::size_t>(K - 1, static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(K)));
      topic[d][i] = static_cast<std::uint32_t>(k);
      ++doc_topic_n[d * K + k];
      ++topic_word_n[k * V + words[d][i]];
      ++topic_n[k];
    }
  }

  std::vector<double> cumulative(K);
  for (std::size_t it = 0; it < params.iterations; ++it) {
    for (std::size_t d = 0; d < D; ++d) {
      std::uint32_t* nd = &doc_topic_n[d * K];
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        std::uint32_t k = topic[d][i];
        --nd[k];
        --topic_word_n[k * V + w];
        --topic_n[k];

        double total = 0;
        for (std::size_t j = 0; j < K; ++j) {
          total += (nd[j] + alpha) * (topic_word_n[j * V + w] + beta) / (topic_n[j] + vbeta);
          cumulative[j] = total;
        }
        const double u = unit_uniform(rng) * total;
        k = static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (k >= K) k = static_cast<std::uint32_t>(K - 1);

        topic[d][i] = k;
        ++nd[k];
        ++topic_word_n[k * V + w];
        ++topic_n[k];
      }
    }
  }

  TopicModel model;
  model.num_topics = K;
  model.vocabulary = vocabulary;
  model.seed = params.seed;
  model.alpha = alpha;
  model.beta = beta;
  model.iterations = params.iterations;

  auto normalise = [](std::vector<double>& row) {
    double sum = 0;
    for (double v : row) sum += v;
    for (double& v : row) v /= sum;
  };
  model.topic_word.assign(K, std::vector<double>(V));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t w = 0; w < V; ++w) {
      model.topic_word[k][w] = (topic_word_n[k * V + w] + beta) / (topic_n[k] + vbeta);
    }
    normalise(model.topic_word[k]);
  }
  model.doc_topic.assign(D, std::vector<double>(K));
  for (std::size_t d = 0; d < D; ++d) {
    const double len = static_cast<double>(words[d].size());
    for (std::size_t k = 0; k < K; ++k) {
      model.doc_topic[d][k] = (doc_topic_n[d * K + k] + alpha) / (len + static_cast<double>(K) * alpha);
    }
    normalise(model.doc_topic[d]);
  }
  return model;
}

TopicModel fit_lda(const DocumentTermMatrix& dtm, const LdaParams& params, std::vector<std::string>* warnings) {
  return fit_lda(dtm.vocabulary, dtm.counts, params, warnings);
}

std::vector<std::vector<std::string>> top_words(const TopicModel& model, std::size_t k) {
  std::vector<std::vector<std::string>> out;
  out.reserve(model.topic_word.size());
  for (const auto& row : model.topic_word) {
    std::vector<std::size_t> order(row.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t n = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (row[a] != row[b]) return row[a] > row[b];
                        return model.vocabulary[a] < model.vocabulary[b];
                      });
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) words.push_back(model.vocabulary[order[i]]);
    out.push_back(std::move(words));
  }
  return out;
}

ClusterResult cluster_by_year(const std::vector<YearSnippet>& snippets, const ClusterOptions& options) {
  ClusterResult result;
  std::map<int, std::vector<Tokens>> by_year;
  for (const auto& s : snippets) {
    if (!s.year || *s.year < options.min_year) continue;
    by_year[*s.year].push_back(tokenize_and_filter(s.text, options.tokenizer));
  }

  std::vector<int> years;
  for (const auto& [year, docs] : by_year) {
    if (docs.size() < options.lda.num_topics) {
      result.warnings.push_back("year " + std::to_string(year) + ": " + std::to_string(docs.size()) +
                                " documents, fewer than " + std::to_string(options.lda.num_topics) +
                                " topics; skipped");
      continue;
    }
    years.push_back(year);
  }

  std::vector<std::optional<YearClusters>> fitted(years.size());
  std::vector<std::vector<std::string>> warnings(years.size());
  parallel_for(years.size(), options.jobs, [&](std::size_t i) {
    const int year = years[i];
    const auto& docs = by_year.at(year);
    YearClusters yc;
    yc.year = year;
    yc.documents = docs.size();
    try {
      yc.dtm = build_dtm(docs, options.thresholds);
    } catch (const EmptyVocabularyError& e) {
      warnings[i].push_back("year " + std::to_string(year) + ": " + e.what() + "; skipped");
      return;
    }
    yc.model = fit_lda(yc.dtm, options.lda, &warnings[i]);
    yc.top = top_words(yc.model, options.top_k);
    fitted[i] = std::move(yc);
  });
  for (std::size_t i = 0; i < years.size(); ++i) {
    for (auto& w : warnings[i]) result.warnings.push_back(std::move(w));
    if (fitted[i]) result.years.emplace(years[i], std::move(*fitted[i]));
  }
  return result;
}

std::string topic_table_csv(const ClusterResult& result, std::size_t top_k) {
  std::ostringstream out;
  out << "year,cluster";
  for (std::size_t i = 1; i <= top_k; ++i) out << ",word" << i;
  out << "\n";
  for (const auto& [year, yc] : result.years) {
    for (std::size_t k = 0; k < yc.top.size(); ++k) {
      out << year << "," << k;
      for (std::size_t i = 0; i < top_k; ++i) out << "," << (i < yc.top[k].size() ? yc.top[k][i] : "");
      out << "\n";
    }
  }
  return out.str();
}

std::string model_to_json(const TopicModel& model) {
  nlohmann::ordered_json j;
  j["num_topics"] = model.num_topics;
  j["seed"] = model.seed;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["iterations"] = model.iterations;
  j["vocabulary"] = model.vocabulary;
  j["topic_word"] = model.topic_word;
  j["doc_topic"] = model.doc_topic;
  return j.dump() + "\n";
}

}  // namespace pseudomine::topics
