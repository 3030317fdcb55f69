#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pseudomine::analytics {

/// What the detection stage learned about one paper.
struct PaperObservation {
  std::string arxiv_id;
  std::optional<int> year;
  std::optional<std::string> category;
  bool has_latex = false;
  bool tag_found = false;
  std::size_t tag_count = 0;
  std::size_t keyword_hits = 0;

  bool has_keywords() const { return keyword_hits > 0; }
  bool operator==(const PaperObservation&) const = default;
};

std::string observations_csv(const std::vector<PaperObservation>& papers);
std::vector<PaperObservation> parse_observations_csv(std::string_view text);

struct YearCounts {
  std::size_t scanned = 0;
  std::size_t with_tag = 0;
  std::size_t with_keywords = 0;

  bool operator==(const YearCounts&) const = default;
};

struct CorpusStats {
  std::size_t total_papers = 0;
  std::size_t papers_with_latex = 0;
  std::size_t papers_with_algorithm_tag = 0;
  std::size_t papers_with_keywords = 0;
  std::map<std::optional<int>, YearCounts> yearly;  // nullopt = unknown year
  std::map<std::string, std::size_t> categories;    // keyword papers only

  double latex_fraction() const {
    return total_papers ? static_cast<double>(papers_with_latex) / static_cast<double>(total_papers) : 0.0;
  }
};

CorpusStats compute_stats(const std::vector<PaperObservation>& papers);
std::string stats_csv(const CorpusStats& stats);

struct YearRow {
  std::optional<int> year;  // nullopt = "unknown"
  YearCounts counts;
  YearCounts cumulative;
};

/// Ascending by year with the unknown bucket last.
std::vector<YearRow> yearly_counts(const std::vector<PaperObservation>& papers);
std::string yearly_csv(const std::vector<YearRow>& rows);

/// Primary category of every paper with at least one keyword hit; papers
/// without a category count under "unknown".
std::map<std::string, std::size_t> category_distribution(const std::vector<PaperObservation>& papers);
std::string categories_csv(const std::map<std::string, std::size_t>& counts);

/// n distinct identifiers drawn uniformly without replacement, sorted. The
/// draw depends only on the set of identifiers and the seed.
std::vector<std::string> sample_uniform(std::vector<std::string> ids, std::size_t n, std::uint64_t seed);

struct ValidationLabel {
  std::string arxiv_id;
  bool has_pseudocode = false;
  std::string notes;
};

std::vector<ValidationLabel> parse_labels_csv(std::string_view text);
std::string labels_csv(const std::vector<ValidationLabel>& labels);

/// `arxiv_id,predicted` with true/false values.
std::map<std::string, bool> parse_predictions_csv(std::string_view text);

struct ValidationReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double fpr = 0;  // fp / (fp + tn), 0 when there are no negatives
  double fnr = 0;  // fn / (fn + tp), 0 when there are no positives

  /// Rates as percentages rounded to one decimal.
  double fpr_percent() const;
  double fnr_percent() const;
};

ValidationReport compute_confusion(const std::vector<ValidationLabel>& labels,
                                   const std::map<std::string, bool>& predictions);

/// Label (has pseudocode) against keyword presence.
struct ContingencyTable {
  std::size_t yes_yes = 0;  // labelled positive, has keywords
  std::size_t yes_no = 0;
  std::size_t no_yes = 0;
  std::size_t no_no = 0;

  bool operator==(const ContingencyTable&) const = default;
};

ContingencyTable indicative_crosscheck(const std::vector<ValidationLabel>& labels,
                                       const std::map<std::string, bool>& has_keywords);

std::string validation_json(const ValidationReport& report, const std::optional<ContingencyTable>& indicative);

double round_percent(double fraction);

}  // namespace pseudomine::analytics
