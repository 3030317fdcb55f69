#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pseudomine::fsutil {

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// `path` relative to `base`, with forward slashes.
std::string relative_generic(const std::filesystem::path& path, const std::filesystem::path& base);

bool has_extension_ci(const std::filesystem::path& path, std::string_view ext);

}  // namespace pseudomine::fsutil
