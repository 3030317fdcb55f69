#include "pseudomine/extractor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

#include "pseudomine/error.hpp"
#include "pseudomine/fsutil.hpp"
#include "pseudomine/latex.hpp"
#include "pseudomine/text.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace pseudomine::extractor {

Extraction extract_pseudocode(std::string_view file_text, std::string_view source_path) {
  Extraction out;
  const auto scan = latex::scan_algorithm_environments(file_text);
  if (scan.environments.empty() && scan.issues.empty()) return out;

  const text::OffsetMap offsets(file_text);
  for (const auto& env : scan.environments) {
    PseudocodeSpan s;
    s.source_path = std::string(source_path);
    s.start_offset = offsets.to_scalar(env.begin.pos);
    s.end_offset = offsets.to_scalar(env.end.end);
    s.raw = std::string(file_text.substr(env.begin.pos, env.end.end - env.begin.pos));
    s.body = std::string(file_text.substr(env.begin.end, env.end.pos - env.begin.end));
    s.starred = env.starred;
    s.nesting_depth_seen = env.max_depth;
    out.spans.push_back(std::move(s));
  }
  for (const auto& issue : scan.issues) {
    out.warnings.push_back({std::string(source_path), offsets.to_scalar(issue.pos), issue.message});
  }
  return out;
}

Extraction extract_bundle(const corpus::PaperBundle& bundle) {
  Extraction all;
  for (const auto& file : bundle.latex_files) {
    auto one = extract_pseudocode(file.text, file.path);
    std::move(one.spans.begin(), one.spans.end(), std::back_inserter(all.spans));
    std::move(one.warnings.begin(), one.warnings.end(), std::back_inserter(all.warnings));
  }
  return all;
}

namespace {

bool blank_line(std::string_view line) { return text::trim(line).empty(); }

// Maximal run of non-blank lines around byte `pos`.
std::string enclosing_paragraph(std::string_view text, std::size_t pos) {
  auto line_start = [&](std::size_t p) {
    const std::size_t nl = p == 0 ? std::string_view::npos : text.rfind('\n', p - 1);
    return nl == std::string_view::npos ? 0 : nl + 1;
  };
  auto line_end = [&](std::size_t p) {
    const std::size_t nl = text.find('\n', p);
    return nl == std::string_view::npos ? text.size() : nl;
  };

  std::size_t begin = line_start(pos);
  while (begin > 0) {
    const std::size_t prev = line_start(begin - 1);
    if (blank_line(text.substr(prev, begin - 1 - prev))) break;
    begin = prev;
  }
  std::size_t end = line_end(pos);
  while (end < text.size()) {
    const std::size_t next_end = line_end(end + 1);
    if (blank_line(text.substr(end + 1, next_end - end - 1))) break;
    end = next_end;
  }
  return std::string(text.substr(begin, end - begin));
}

struct LabelSite {
  const corpus::SourceFile* file = nullptr;
  latex::LabelCommand label;
};

}  // namespace

Supplements extract_referenced_content(const PseudocodeSpan& span, const corpus::PaperBundle& bundle) {
  Supplements out;

  std::vector<std::string> wanted;
  std::set<std::string> seen;
  for (const auto& rc : latex::ref_commands(span.body)) {
    std::string_view targets = rc.target;
    while (!targets.empty()) {
      const std::size_t comma = targets.find(',');
      const std::string label(text::trim(targets.substr(0, comma)));
      targets = comma == std::string_view::npos ? std::string_view{} : targets.substr(comma + 1);
      if (!label.empty() && seen.insert(label).second) wanted.push_back(label);
    }
  }
  if (wanted.empty()) return out;

  // First definition of each label wins, files in path order.
  std::map<std::string, LabelSite, std::less<>> sites;
  for (const auto& file : bundle.latex_files) {
    const auto comments = latex::comment_mask(file.text);
    for (const auto& lc : latex::label_commands(file.text)) {
      if (comments[lc.pos]) continue;
      sites.try_emplace(std::string(lc.label), LabelSite{&file, lc});
    }
  }

  std::map<const corpus::SourceFile*, std::vector<latex::Environment>> env_cache;
  for (const auto& label : wanted) {
    auto it = sites.find(label);
    if (it == sites.end()) {
      out.warnings.push_back({span.source_path, span.start_offset, "label not found: " + label});
      continue;
    }
    const auto& site = it->second;
    auto [cache, fresh] = env_cache.try_emplace(site.file);
    if (fresh) cache->second = latex::match_environments(site.file->text);

    const latex::Environment* innermost = nullptr;
    for (const auto& env : cache->second) {
      if (env.name == "document" || env.begin > site.label.pos || env.end < site.label.end) continue;
      if (!innermost || env.begin > innermost->begin) innermost = &env;
    }

    SupplementRecord rec;
    rec.label = label;
    rec.source_path = site.file->path;
    if (innermost) {
      rec.environment = innermost->name;
      rec.content = site.file->text.substr(innermost->begin, innermost->end - innermost->begin);
    } else {
      rec.environment = "paragraph";
      rec.content = enclosing_paragraph(site.file->text, site.label.pos);
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

PseudocodeRecord make_record(const PseudocodeSpan& span, std::vector<SupplementRecord> supplements,
                             const corpus::PaperMetadata& metadata) {
  PseudocodeRecord r;
  r.arxiv_id = metadata.arxiv_id;
  r.year = metadata.year;
  r.title = metadata.title;
  r.category = metadata.category;
  r.subcategory = metadata.subcategory;
  r.pseudocode = span.raw;
  r.supplements = std::move(supplements);
  r.source_path = span.source_path;
  r.span = {span.start_offset, span.end_offset};
  r.starred = span.starred;
  return r;
}

namespace {

template <class T>
ordered_json nullable(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <class T>
std::optional<T> read_nullable(const ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace

std::string record_to_json(const PseudocodeRecord& r) {
  ordered_json j;
  j["arxiv_id"] = r.arxiv_id;
  j["year"] = nullable(r.year);
  j["title"] = nullable(r.title);
  j["category"] = nullable(r.category);
  j["subcategory"] = nullable(r.subcategory);
  j["pseudocode"] = r.pseudocode;
  j["supplements"] = ordered_json::array();
  for (const auto& s : r.supplements) {
    j["supplements"].push_back(
        {{"label", s.label}, {"environment", s.environment}, {"content", s.content}, {"source_path", s.source_path}});
  }
  j["reference_snippets"] = r.reference_snippets;
  j["source_path"] = r.source_path;
  j["span"] = {r.span.first, r.span.second};
  j["starred"] = r.starred;
  return j.dump(2) + "\n";
}

PseudocodeRecord record_from_json(std::string_view json_text) {
  PseudocodeRecord r;
  try {
    const auto j = ordered_json::parse(json_text);
    r.arxiv_id = j.at("arxiv_id").get<std::string>();
    r.year = read_nullable<int>(j, "year");
    r.title = read_nullable<std::string>(j, "title");
    r.category = read_nullable<std::string>(j, "category");
    r.subcategory = read_nullable<std::string>(j, "subcategory");
    r.pseudocode = j.at("pseudocode").get<std::string>();
    for (const auto& s : j.at("supplements")) {
      r.supplements.push_back({s.at("label").get<std::string>(), s.at("content").get<std::string>(),
                               s.at("environment").get<std::string>(), s.at("source_path").get<std::string>()});
    }
    r.reference_snippets = j.at("reference_snippets").get<std::vector<std::string>>();
    r.source_path = j.at("source_path").get<std::string>();
    const auto& span = j.at("span");
    if (!span.is_array() || span.size() != 2) throw Error("span must be a pair");
    r.span = {span[0].get<std::size_t>(), span[1].get<std::size_t>()};
    r.starred = j.at("starred").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed pseudocode record: ") + e.what());
  }
  return r;
}

fs::path record_path(const fs::path& out_dir, std::string_view arxiv_id, std::size_t ordinal) {
  return out_dir / fs::path(arxiv_id) / (std::to_string(ordinal) + ".json");
}

fs::path emit_record(const PseudocodeRecord& record, std::size_t ordinal, const fs::path& out_dir) {
  const fs::path path = record_path(out_dir, record.arxiv_id, ordinal);
  try {
    fsutil::write_file_atomic(path, record_to_json(record));
  } catch (const std::exception& e) {
    throw IoError("cannot write record " + path.string() + ": " + e.what());
  }
  return path;
}

fs::path emit_record(const PseudocodeSpan& span, std::vector<SupplementRecord> supplements,
                     const corpus::PaperMetadata& metadata, std::size_t ordinal, const fs::path& out_dir) {
  return emit_record(make_record(span, std::move(supplements), metadata), ordinal, out_dir);
}

std::vector<PseudocodeRecord> read_records(const fs::path& out_dir, std::string_view arxiv_id) {
  std::vector<std::pair<std::size_t, fs::path>> files;
  const fs::path dir = out_dir / fs::path(arxiv_id);
  if (!fs::is_directory(dir)) return {};
  for (const auto& de : fs::directory_iterator(dir)) {
    const auto stem = de.path().stem().string();
    if (!de.is_regular_file() || de.path().extension() != ".json" || stem.empty() ||
        !std::all_of(stem.begin(), stem.end(), text::is_ascii_digit)) {
      continue;
    }
    files.emplace_back(std::stoul(stem), de.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PseudocodeRecord> out;
  out.reserve(files.size());
  for (const auto& [ordinal, path] : files) out.push_back(record_from_json(fsutil::read_file(path)));
  return out;
}

}  // namespace pseudomine::extractor
