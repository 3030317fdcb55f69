#include "pseudomine/config.hpp"

#include <set>

#include "json.hpp"

#include "pseudomine/error.hpp"
#include "pseudomine/fsutil.hpp"
#include "pseudomine/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pseudomine {

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(jobs >= 1, "jobs must be positive");
  require(max_archive_depth >= 1, "ingest.max_archive_depth must be positive");
  snippet.validate();
  require(tfidf.max_df > 0 && tfidf.max_df <= 1, "tfidf.max_df must be in (0, 1]");
  require(tfidf.min_df > 0 && tfidf.min_df <= tfidf.max_df, "tfidf.min_df must be in (0, max_df]");
  require(lda.num_topics >= 2, "lda.num_topics must be at least 2");
  require(!lda.alpha || *lda.alpha > 0, "lda.alpha must be positive");
  require(lda.beta > 0, "lda.beta must be positive");
  require(lda.iterations >= 1, "lda.iterations must be positive");
  require(top_words >= 1, "lda.top_words must be positive");
  require(min_year > 0, "lda.min_year must be positive");
  require(tokenizer.min_token_length >= 1, "tokenizer.min_token_length must be positive");
  require(sample_size >= 1, "sampling.n must be positive");
}

namespace {

void reject_unknown(const json& obj, const char* section, std::initializer_list<const char*> known) {
  if (!obj.is_object()) throw ConfigError(std::string("config section '") + section + "' must be an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(std::string("unknown config key '") + section + "." + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

// Positive integer read through a signed type so "-1" is caught, not wrapped.
template <class T>
void read_count(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  if (!it->is_number_integer() || it->get<long long>() < 0) {
    throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
  }
  out = static_cast<T>(it->get<long long>());
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::set<std::string> lowercase_set(const json& arr, const char* key) {
  if (!arr.is_array()) throw ConfigError(std::string("config key '") + key + "' must be a list of words");
  std::set<std::string> out;
  for (const auto& w : arr) {
    if (!w.is_string()) throw ConfigError(std::string("config key '") + key + "' must be a list of words");
    out.insert(text::to_lower_ascii(w.get<std::string>()));
  }
  return out;
}

}  // namespace

PipelineConfig config_from_json(std::string_view json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root, "<root>",
                 {"corpus_root", "output_dir", "jobs", "ingest", "detect", "snippet", "cleaning", "tokenizer", "tfidf",
                  "lda", "sampling", "validation"});

  PipelineConfig cfg;
  std::string s;
  if (s.clear(), read(root, "corpus_root", s), !s.empty()) cfg.corpus_root = resolve(base_dir, s);
  if (s.clear(), read(root, "output_dir", s), !s.empty()) cfg.output_dir = resolve(base_dir, s);
  read_count(root, "jobs", cfg.jobs);

  if (auto it = root.find("ingest"); it != root.end()) {
    reject_unknown(*it, "ingest", {"max_archive_depth"});
    read_count(*it, "max_archive_depth", cfg.max_archive_depth);
  }
  if (auto it = root.find("detect"); it != root.end()) {
    reject_unknown(*it, "detect", {"keyword_classes"});
    if (auto kc = it->find("keyword_classes"); kc != it->end()) {
      if (!kc->is_array()) throw ConfigError("detect.keyword_classes must be a list");
      cfg.keyword_classes = detector::KeywordClasses::none();
      for (const auto& name : *kc) {
        auto cls = name.is_string() ? detector::parse_keyword_class(name.get<std::string>()) : std::nullopt;
        if (!cls) throw ConfigError("unknown keyword class " + name.dump());
        (*cls == detector::KeywordClass::Pseudocode ? cfg.keyword_classes.pseudocode
                                                    : cfg.keyword_classes.algorithm) = true;
      }
    }
  }
  if (auto it = root.find("snippet"); it != root.end()) {
    reject_unknown(*it, "snippet", {"span_chars", "boundary_window", "sentence_terminators"});
    read_count(*it, "span_chars", cfg.snippet.span_chars);
    read_count(*it, "boundary_window", cfg.snippet.boundary_window);
    std::string terms;
    read(*it, "sentence_terminators", terms);
    if (it->contains("sentence_terminators")) cfg.snippet.sentence_terminators = text::to_u32(terms);
  }
  if (auto it = root.find("cleaning"); it != root.end()) {
    reject_unknown(*it, "cleaning",
                   {"remove_comments", "remove_math", "remove_commands", "remove_underscore_tokens",
                    "collapse_whitespace"});
    read(*it, "remove_comments", cfg.cleaning.remove_comments);
    read(*it, "remove_math", cfg.cleaning.remove_math);
    read(*it, "remove_commands", cfg.cleaning.remove_commands);
    read(*it, "remove_underscore_tokens", cfg.cleaning.remove_underscore_tokens);
    read(*it, "collapse_whitespace", cfg.cleaning.collapse_whitespace);
  }
  if (auto it = root.find("tokenizer"); it != root.end()) {
    reject_unknown(*it, "tokenizer", {"stopwords", "extra_stopwords", "non_instructive", "min_token_length"});
    if (auto w = it->find("stopwords"); w != it->end() && !w->is_null()) {
      cfg.tokenizer.stopwords = lowercase_set(*w, "tokenizer.stopwords");
    }
    if (auto w = it->find("extra_stopwords"); w != it->end() && !w->is_null()) {
      auto extra = lowercase_set(*w, "tokenizer.extra_stopwords");
      cfg.tokenizer.stopwords.insert(extra.begin(), extra.end());
    }
    if (auto w = it->find("non_instructive"); w != it->end() && !w->is_null()) {
      cfg.tokenizer.non_instructive = lowercase_set(*w, "tokenizer.non_instructive");
    }
    read_count(*it, "min_token_length", cfg.tokenizer.min_token_length);
  }
  if (auto it = root.find("tfidf"); it != root.end()) {
    reject_unknown(*it, "tfidf", {"max_df", "min_df"});
    read(*it, "max_df", cfg.tfidf.max_df);
    read(*it, "min_df", cfg.tfidf.min_df);
  }
  if (auto it = root.find("lda"); it != root.end()) {
    reject_unknown(*it, "lda", {"num_topics", "seed", "alpha", "beta", "iterations", "top_words", "min_year"});
    read_count(*it, "num_topics", cfg.lda.num_topics);
    read_count(*it, "seed", cfg.lda.seed);
    if (auto a = it->find("alpha"); a != it->end() && !a->is_null()) {
      double alpha = 0;
      read(*it, "alpha", alpha);
      cfg.lda.alpha = alpha;
    }
    read(*it, "beta", cfg.lda.beta);
    read_count(*it, "iterations", cfg.lda.iterations);
    read_count(*it, "top_words", cfg.top_words);
    read(*it, "min_year", cfg.min_year);
  }
  if (auto it = root.find("sampling"); it != root.end()) {
    reject_unknown(*it, "sampling", {"n", "seed"});
    read_count(*it, "n", cfg.sample_size);
    read_count(*it, "seed", cfg.sample_seed);
  }
  if (auto it = root.find("validation"); it != root.end()) {
    reject_unknown(*it, "validation", {"labels", "predictions"});
    if (s.clear(), read(*it, "labels", s), !s.empty()) cfg.labels = resolve(base_dir, s);
    if (s.clear(), read(*it, "predictions", s), !s.empty()) cfg.predictions = resolve(base_dir, s);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::string content;
  try {
    content = fsutil::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(content, path.parent_path());
}

std::string config_to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["corpus_root"] = cfg.corpus_root.string();
  j["output_dir"] = cfg.output_dir.string();
  j["jobs"] = cfg.jobs;
  j["ingest"] = {{"max_archive_depth", cfg.max_archive_depth}};
  auto classes = nlohmann::ordered_json::array();
  if (cfg.keyword_classes.pseudocode) classes.push_back("Pseudocode");
  if (cfg.keyword_classes.algorithm) classes.push_back("Algorithm");
  j["detect"] = {{"keyword_classes", classes}};
  j["snippet"] = {{"span_chars", cfg.snippet.span_chars},
                  {"boundary_window", cfg.snippet.boundary_window},
                  {"sentence_terminators", text::to_utf8(cfg.snippet.sentence_terminators)}};
  j["cleaning"] = {{"remove_comments", cfg.cleaning.remove_comments},
                   {"remove_math", cfg.cleaning.remove_math},
                   {"remove_commands", cfg.cleaning.remove_commands},
                   {"remove_underscore_tokens", cfg.cleaning.remove_underscore_tokens},
                   {"collapse_whitespace", cfg.cleaning.collapse_whitespace}};
  nlohmann::ordered_json tok;
  if (cfg.tokenizer.stopwords != topics::english_stopwords()) tok["stopwords"] = cfg.tokenizer.stopwords;
  tok["non_instructive"] = cfg.tokenizer.non_instructive;
  tok["min_token_length"] = cfg.tokenizer.min_token_length;
  j["tokenizer"] = tok;
  j["tfidf"] = {{"max_df", cfg.tfidf.max_df}, {"min_df", cfg.tfidf.min_df}};
  j["lda"] = {{"num_topics", cfg.lda.num_topics},
              {"seed", cfg.lda.seed},
              {"alpha", cfg.lda.alpha ? nlohmann::ordered_json(*cfg.lda.alpha) : nlohmann::ordered_json(nullptr)},
              {"beta", cfg.lda.beta},
              {"iterations", cfg.lda.iterations},
              {"top_words", cfg.top_words},
              {"min_year", cfg.min_year}};
  j["sampling"] = {{"n", cfg.sample_size}, {"seed", cfg.sample_seed}};
  j["validation"] = {
      {"labels", cfg.labels ? nlohmann::ordered_json(cfg.labels->string()) : nlohmann::ordered_json(nullptr)},
      {"predictions",
       cfg.predictions ? nlohmann::ordered_json(cfg.predictions->string()) : nlohmann::ordered_json(nullptr)}};
  return j.dump(2) + "\n";
}

}  // namespace pseudomine
