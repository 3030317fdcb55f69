#include "pseudomine/fsutil.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "pseudomine/error.hpp"
#include "pseudomine/text.hpp"

namespace fs = std::filesystem;

namespace pseudomine::fsutil {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed: " + path.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

std::string relative_generic(const fs::path& path, const fs::path& base) {
  return path.lexically_relative(base).generic_string();
}

bool has_extension_ci(const fs::path& path, std::string_view ext) {
  return text::to_lower_ascii(path.extension().string()) == ext;
}

}  // namespace pseudomine::fsutil
