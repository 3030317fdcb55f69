#include "pseudomine/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "pseudomine/csv.hpp"
#include "pseudomine/error.hpp"
#include "pseudomine/text.hpp"

namespace pseudomine::analytics {

namespace {

std::string year_key(const std::optional<int>& year) { return year ? std::to_string(*year) : "unknown"; }

std::size_t parse_count(const std::string& s, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), text::is_ascii_digit)) {
    throw Error(std::string("bad ") + what + " value '" + s + "'");
  }
  return std::stoul(s);
}

bool require_bool(const std::string& s, const char* what) {
  bool v = false;
  if (!csv::parse_bool(s, v)) throw Error(std::string("bad ") + what + " value '" + s + "' (expected true/false)");
  return v;
}

// Maps header names to column positions and checks the required ones exist.
std::map<std::string, std::size_t> header_index(const csv::Row& header, std::initializer_list<const char*> required) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) idx[std::string(text::trim(header[i]))] = i;
  for (const char* name : required) {
    if (!idx.contains(name)) throw Error(std::string("CSV header lacks column '") + name + "'");
  }
  return idx;
}

const std::string& cell(const csv::Row& row, std::size_t i) {
  static const std::string empty;
  return i < row.size() ? row[i] : empty;
}

}  // namespace

std::string observations_csv(const std::vector<PaperObservation>& papers) {
  std::string out = "arxiv_id,year,category,has_latex,latex_tag_found,tag_count,keyword_hits\n";
  for (const auto& p : papers) {
    out += csv::join({p.arxiv_id, p.year ? std::to_string(*p.year) : "", p.category.value_or(""),
                      p.has_latex ? "true" : "false", p.tag_found ? "true" : "false", std::to_string(p.tag_count),
                      std::to_string(p.keyword_hits)});
    out += "\n";
  }
  return out;
}

std::vector<PaperObservation> parse_observations_csv(std::string_view text) {
  auto rows = csv::parse(text);
  std::vector<PaperObservation> out;
  if (rows.empty()) return out;
  const auto idx = header_index(
      rows[0], {"arxiv_id", "year", "category", "has_latex", "latex_tag_found", "tag_count", "keyword_hits"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    PaperObservation p;
    p.arxiv_id = cell(row, idx.at("arxiv_id"));
    if (const auto& y = cell(row, idx.at("year")); !y.empty()) p.year = static_cast<int>(parse_count(y, "year"));
    if (const auto& c = cell(row, idx.at("category")); !c.empty()) p.category = c;
    p.has_latex = require_bool(cell(row, idx.at("has_latex")), "has_latex");
    p.tag_found = require_bool(cell(row, idx.at("latex_tag_found")), "latex_tag_found");
    p.tag_count = parse_count(cell(row, idx.at("tag_count")), "tag_count");
    p.keyword_hits = parse_count(cell(row, idx.at("keyword_hits")), "keyword_hits");
    out.push_back(std::move(p));
  }
  return out;
}

CorpusStats compute_stats(const std::vector<PaperObservation>& papers) {
  CorpusStats s;
  for (const auto& p : papers) {
    ++s.total_papers;
    auto& y = s.yearly[p.year];
    ++y.scanned;
    if (p.has_latex) ++s.papers_with_latex;
    if (p.tag_found) {
      ++s.papers_with_algorithm_tag;
      ++y.with_tag;
    }
    if (p.has_keywords()) {
      ++s.papers_with_keywords;
      ++y.with_keywords;
    }
  }
  s.categories = category_distribution(papers);
  return s;
}

std::string stats_csv(const CorpusStats& s) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "total_papers," << s.total_papers << "\n";
  out << "papers_with_latex," << s.papers_with_latex << "\n";
  out << "papers_with_algorithm_tag," << s.papers_with_algorithm_tag << "\n";
  out << "papers_with_keywords," << s.papers_with_keywords << "\n";
  char frac[32];
  std::snprintf(frac, sizeof frac, "%.6f", s.latex_fraction());
  out << "latex_fraction," << frac << "\n";
  return out.str();
}

std::vector<YearRow> yearly_counts(const std::vector<PaperObservation>& papers) {
  std::map<std::optional<int>, YearCounts> by_year;
  for (const auto& p : papers) {
    auto& y = by_year[p.year];
    ++y.scanned;
    if (p.tag_found) ++y.with_tag;
    if (p.has_keywords()) ++y.with_keywords;
  }
  std::vector<YearRow> rows;
  YearCounts running;
  auto add = [&](const std::optional<int>& year, const YearCounts& c) {
    running.scanned += c.scanned;
    running.with_tag += c.with_tag;
    running.with_keywords += c.with_keywords;
    rows.push_back({year, c, running});
  };
  for (const auto& [year, c] : by_year) {
    if (year) add(year, c);
  }
  if (auto it = by_year.find(std::nullopt); it != by_year.end()) add(std::nullopt, it->second);
  return rows;
}

std::string yearly_csv(const std::vector<YearRow>& rows) {
  std::ostringstream out;
  out << "year,scanned,with_tag,with_keywords,cumulative_scanned,cumulative_with_tag,cumulative_with_keywords\n";
  for (const auto& r : rows) {
    out << year_key(r.year) << "," << r.counts.scanned << "," << r.counts.with_tag << "," << r.counts.with_keywords
        << "," << r.cumulative.scanned << "," << r.cumulative.with_tag << "," << r.cumulative.with_keywords << "\n";
  }
  return out.str();
}

std::map<std::string, std::size_t> category_distribution(const std::vector<PaperObservation>& papers) {
  std::map<std::string, std::size_t> counts;
  for (const auto& p : papers) {
    if (!p.has_keywords()) continue;
    const std::string cat = p.category && !p.category->empty() ? *p.category : "unknown";
    ++counts[cat];
  }
  return counts;
}

std::string categories_csv(const std::map<std::string, std::size_t>& counts) {
  std::string out = "category,papers_with_keywords\n";
  for (const auto& [cat, n] : counts) out += csv::field(cat) + "," + std::to_string(n) + "\n";
  return out;
}

namespace {

// Uniform integer in [0, bound) by rejection; bit-identical across platforms.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

std::vector<std::string> sample_uniform(std::vector<std::string> ids, std::size_t n, std::uint64_t seed) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (n > ids.size()) {
    throw Error("cannot sample " + std::to_string(n) + " papers from a population of " + std::to_string(ids.size()));
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(n);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<ValidationLabel> parse_labels_csv(std::string_view text) {
  auto rows = csv::parse(text);
  std::vector<ValidationLabel> out;
  if (rows.empty()) return out;
  const auto idx = header_index(rows[0], {"arxiv_id", "has_pseudocode"});
  const auto notes = idx.find("notes");
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ValidationLabel l;
    l.arxiv_id = std::string(text::trim(cell(rows[r], idx.at("arxiv_id"))));
    if (l.arxiv_id.empty()) throw Error("label row " + std::to_string(r + 1) + " has no arxiv_id");
    if (!seen.insert(l.arxiv_id).second) throw Error("duplicate label for " + l.arxiv_id);
    l.has_pseudocode = require_bool(cell(rows[r], idx.at("has_pseudocode")), "has_pseudocode");
    if (notes != idx.end()) l.notes = cell(rows[r], notes->second);
    out.push_back(std::move(l));
  }
  return out;
}

std::string labels_csv(const std::vector<ValidationLabel>& labels) {
  std::string out = "arxiv_id,has_pseudocode,notes\n";
  for (const auto& l : labels) out += csv::join({l.arxiv_id, l.has_pseudocode ? "true" : "false", l.notes}) + "\n";
  return out;
}

std::map<std::string, bool> parse_predictions_csv(std::string_view text) {
  auto rows = csv::parse(text);
  std::map<std::string, bool> out;
  if (rows.empty()) return out;
  const auto idx = header_index(rows[0], {"arxiv_id", "predicted"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    out[std::string(text::trim(cell(rows[r], idx.at("arxiv_id"))))] =
        require_bool(cell(rows[r], idx.at("predicted")), "predicted");
  }
  return out;
}

double round_percent(double fraction) { return std::round(fraction * 1000.0) / 10.0; }

double ValidationReport::fpr_percent() const { return round_percent(fpr); }
double ValidationReport::fnr_percent() const { return round_percent(fnr); }

namespace {

template <class Map>
void require_complete(const std::vector<ValidationLabel>& labels, const Map& m, const char* what) {
  std::vector<std::string> missing;
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l.arxiv_id).second) throw Error("duplicate label for " + l.arxiv_id);
    if (!m.contains(l.arxiv_id)) missing.push_back(l.arxiv_id);
  }
  if (missing.empty()) return;
  std::string msg = std::string("missing ") + what + " for " + std::to_string(missing.size()) + " labelled paper(s):";
  for (const auto& id : missing) msg += " " + id;
  throw Error(msg);
}

}  // namespace

ValidationReport compute_confusion(const std::vector<ValidationLabel>& labels,
                                   const std::map<std::string, bool>& predictions) {
  require_complete(labels, predictions, "predictions");
  ValidationReport r;
  for (const auto& l : labels) {
    const bool predicted = predictions.at(l.arxiv_id);
    if (l.has_pseudocode) {
      predicted ? ++r.tp : ++r.fn;
    } else {
      predicted ? ++r.fp : ++r.tn;
    }
  }
  r.fpr = r.fp + r.tn ? static_cast<double>(r.fp) / static_cast<double>(r.fp + r.tn) : 0.0;
  r.fnr = r.fn + r.tp ? static_cast<double>(r.fn) / static_cast<double>(r.fn + r.tp) : 0.0;
  return r;
}

ContingencyTable indicative_crosscheck(const std::vector<ValidationLabel>& labels,
                                       const std::map<std::string, bool>& has_keywords) {
  require_complete(labels, has_keywords, "keyword results");
  ContingencyTable t;
  for (const auto& l : labels) {
    const bool kw = has_keywords.at(l.arxiv_id);
    if (l.has_pseudocode) {
      kw ? ++t.yes_yes : ++t.yes_no;
    } else {
      kw ? ++t.no_yes : ++t.no_no;
    }
  }
  return t;
}

std::string validation_json(const ValidationReport& r, const std::optional<ContingencyTable>& indicative) {
  nlohmann::ordered_json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["tn"] = r.tn;
  j["fn"] = r.fn;
  j["fpr"] = r.fpr;
  j["fnr"] = r.fnr;
  j["fpr_percent"] = r.fpr_percent();
  j["fnr_percent"] = r.fnr_percent();
  if (indicative) {
    j["indicative"] = {{"positive_with_keywords", indicative->yes_yes},
                       {"positive_without_keywords", indicative->yes_no},
                       {"negative_with_keywords", indicative->no_yes},
                       {"negative_without_keywords", indicative->no_no}};
  }
  return j.dump(2) + "\n";
}

}  // namespace pseudomine::analytics
