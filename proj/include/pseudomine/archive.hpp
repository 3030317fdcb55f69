#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pseudomine::archive {

struct ZipEntry {
  std::string name;  // path inside the archive, forward slashes
  std::string data;
  bool is_directory = false;
};

/// Reads every entry of a ZIP file (stored or deflated members).
/// Throws pseudomine::Error on a corrupt or unsupported archive.
std::vector<ZipEntry> read_zip(const std::filesystem::path& path);

bool is_zip_path(const std::filesystem::path& path);

struct UnpackReport {
  std::size_t archives_opened = 0;
  std::size_t files_produced = 0;  // non-archive members written
  int depth_reached = 0;
  std::vector<std::string> warnings;
};

constexpr int kDefaultMaxDepth = 10;

/// Extracts every ZIP under `root` next to itself and deletes it, repeating
/// on archives that come out of archives until none remain. An archive at
/// nesting depth greater than `max_depth` raises ArchiveDepthError. Corrupt
/// archives are reported as warnings and left in place.
UnpackReport unpack_archives(const std::filesystem::path& root, int max_depth = kDefaultMaxDepth);

}  // namespace pseudomine::archive
