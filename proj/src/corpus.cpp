#include "pseudomine/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <set>

#include "json.hpp"

#include "pseudomine/error.hpp"
#include "pseudomine/fsutil.hpp"
#include "pseudomine/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pseudomine::corpus {

const SourceFile* PaperBundle::find_file(std::string_view path) const {
  for (const auto& f : latex_files) {
    if (f.path == path) return &f;
  }
  return nullptr;
}

namespace {

int current_year() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  return tm.tm_year + 1900;
}

void warn(std::vector<std::string>* warnings, std::string msg) {
  if (warnings) warnings->push_back(std::move(msg));
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           std::vector<std::string>* warnings) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  warn(warnings, std::string("field '") + key + "' is not a string; ignored");
  return std::nullopt;
}

// Accepts an integer or a string of digits, optionally prefixed (e.g. "v2").
std::optional<long> loose_integer(const json& v, std::string_view prefix = {}) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_unsigned()) return static_cast<long>(v.get<unsigned long>());
  if (!v.is_string()) return std::nullopt;
  std::string s = v.get<std::string>();
  if (!prefix.empty() && s.starts_with(prefix)) s.erase(0, prefix.size());
  if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), text::is_ascii_digit)) return std::nullopt;
  return std::stol(s);
}

}  // namespace

PaperMetadata parse_metadata_json(std::string_view json_text, std::vector<std::string>* warnings) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw MetadataError(std::string("metadata is not valid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw MetadataError("metadata must be a JSON object");

  PaperMetadata m;
  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw MetadataError("metadata has no 'id'");
  }
  m.arxiv_id = id->get<std::string>();

  if (auto it = obj.find("version"); it != obj.end() && !it->is_null()) {
    auto v = loose_integer(*it, "v");
    if (v && *v > 0) {
      m.version = static_cast<int>(*v);
    } else {
      warn(warnings, "malformed version for " + m.arxiv_id + "; ignored");
    }
  }
  if (auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
    auto y = loose_integer(*it);
    if (y && *y >= kFirstArxivYear && *y <= current_year()) {
      m.year = static_cast<int>(*y);
    } else {
      warn(warnings, "malformed year for " + m.arxiv_id + "; ignored");
    }
  }
  m.title = optional_string(obj, "title", warnings);
  m.abstract = optional_string(obj, "abstract", warnings);
  m.category = optional_string(obj, "category", warnings);
  m.subcategory = optional_string(obj, "subcategory", warnings);
  m.source_url = optional_string(obj, "url", warnings);
  return m;
}

PaperMetadata parse_metadata(const fs::path& path, std::vector<std::string>* warnings) {
  return parse_metadata_json(fsutil::read_file(path), warnings);
}

std::vector<SourceFile> load_sources(const fs::path& dir) {
  std::vector<SourceFile> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& de : fs::recursive_directory_iterator(dir)) {
    if (!de.is_regular_file()) continue;
    const auto& p = de.path();
    if (!fsutil::has_extension_ci(p, ".tex") && !fsutil::has_extension_ci(p, ".bbl")) continue;
    auto decoded = text::decode_bytes(fsutil::read_file(p));
    files.push_back({fsutil::relative_generic(p, dir), std::move(decoded.text), decoded.encoding});
  }
  std::sort(files.begin(), files.end(), [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return files;
}

namespace {

std::set<std::string> stems_with_extension(const fs::path& dir, std::string_view ext) {
  std::set<std::string> out;
  if (dir.empty() || !fs::is_directory(dir)) return out;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && fsutil::has_extension_ci(de.path(), ext)) out.insert(de.path().stem().string());
  }
  return out;
}

std::set<std::string> subdirectories(const fs::path& dir) {
  std::set<std::string> out;
  if (dir.empty() || !fs::is_directory(dir)) return out;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_directory()) out.insert(de.path().filename().string());
  }
  return out;
}

}  // namespace

PairingResult pair_by_identifier(const fs::path& pdf_text_dir, const fs::path& source_dir,
                                 const fs::path& meta_dir, unsigned jobs) {
  const auto pdf_ids = stems_with_extension(pdf_text_dir, ".txt");
  const auto src_ids = subdirectories(source_dir);
  const auto meta_ids = stems_with_extension(meta_dir, ".json");

  std::set<std::string> all = pdf_ids;
  all.insert(src_ids.begin(), src_ids.end());
  const std::vector<std::string> ids(all.begin(), all.end());

  PairingResult result;
  for (const auto& id : ids) {
    if (!src_ids.contains(id)) result.unmatched.pdf_only.push_back(id);
    if (!pdf_ids.contains(id)) result.unmatched.source_only.push_back(id);
  }
  for (const auto& id : meta_ids) {
    if (!all.contains(id)) result.unmatched.metadata_only.push_back(id);
  }

  result.bundles.resize(ids.size());
  std::vector<std::vector<std::string>> warnings(ids.size());
  parallel_for(ids.size(), jobs, [&](std::size_t i) {
    const std::string& id = ids[i];
    PaperBundle& b = result.bundles[i];
    b.metadata.arxiv_id = id;
    if (meta_ids.contains(id)) {
      try {
        b.metadata = parse_metadata(meta_dir / (id + ".json"), &warnings[i]);
        if (b.metadata.arxiv_id != id) {
          warnings[i].push_back("metadata id '" + b.metadata.arxiv_id + "' differs from on-disk name '" + id +
                                "'; using on-disk name");
          b.metadata.arxiv_id = id;
        }
      } catch (const MetadataError& e) {
        warnings[i].push_back(id + ": " + e.what());
        b.metadata = PaperMetadata{};
        b.metadata.arxiv_id = id;
      }
    }
    if (pdf_ids.contains(id)) b.pdf_text = text::decode_bytes(fsutil::read_file(pdf_text_dir / (id + ".txt"))).text;
    if (src_ids.contains(id)) b.latex_files = load_sources(source_dir / id);
    b.has_latex = !b.latex_files.empty();
  });
  for (auto& w : warnings) {
    result.warnings.insert(result.warnings.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
  }
  return result;
}

PairingResult load_corpus(const fs::path& root, unsigned jobs) {
  return pair_by_identifier(root / "pdf_text", root / "sources", root / "meta", jobs);
}

}  // namespace pseudomine::corpus
