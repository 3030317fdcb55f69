#include "pseudomine/archive.hpp"

#include <algorithm>
#include <deque>
#include <fstream>

#include <zlib.h>

#include "pseudomine/error.hpp"
#include "pseudomine/fsutil.hpp"

namespace fs = std::filesystem;

namespace pseudomine::archive {

namespace {

constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::size_t kEocdSize = 22;
constexpr std::size_t kCentralSize = 46;
constexpr std::size_t kLocalSize = 30;

class Reader {
 public:
  Reader(const std::string& buf, std::string path) : buf_(buf), path_(std::move(path)) {}

  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return static_cast<std::uint16_t>(byte(at) | (byte(at + 1) << 8));
  }
  std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    return byte(at) | (byte(at + 1) << 8) | (byte(at + 2) << 16) | (static_cast<std::uint32_t>(byte(at + 3)) << 24);
  }
  std::string_view bytes(std::size_t at, std::size_t n) const {
    need(at, n);
    return std::string_view(buf_).substr(at, n);
  }
  [[noreturn]] void fail(const std::string& what) const { throw Error("corrupt zip " + path_ + ": " + what); }

 private:
  std::uint32_t byte(std::size_t at) const { return static_cast<unsigned char>(buf_[at]); }
  void need(std::size_t at, std::size_t n) const {
    if (at > buf_.size() || n > buf_.size() - at) fail("truncated");
  }
  const std::string& buf_;
  std::string path_;
};

std::string inflate_raw(const Reader& r, std::string_view in, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) r.fail("inflate init");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) r.fail("bad deflate stream");
  return out;
}

}  // namespace

std::vector<ZipEntry> read_zip(const fs::path& path) {
  const std::string buf = fsutil::read_file(path);
  Reader r(buf, path.string());
  if (buf.size() < kEocdSize) r.fail("too small");

  std::size_t eocd = std::string::npos;
  const std::size_t lowest = buf.size() > kEocdSize + 0xFFFF ? buf.size() - kEocdSize - 0xFFFF : 0;
  for (std::size_t at = buf.size() - kEocdSize + 1; at-- > lowest;) {
    if (r.u32(at) == kEocdSig) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string::npos) r.fail("no end-of-central-directory record");

  const std::size_t count = r.u16(eocd + 10);
  std::size_t at = r.u32(eocd + 16);
  std::vector<ZipEntry> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (r.u32(at) != kCentralSig) r.fail("bad central directory");
    const std::uint16_t flags = r.u16(at + 8);
    const std::uint16_t method = r.u16(at + 10);
    const std::uint32_t crc = r.u32(at + 16);
    const std::uint32_t csize = r.u32(at + 20);
    const std::uint32_t usize = r.u32(at + 24);
    const std::uint16_t nlen = r.u16(at + 28);
    const std::uint16_t elen = r.u16(at + 30);
    const std::uint16_t clen = r.u16(at + 32);
    const std::uint32_t local = r.u32(at + 42);
    ZipEntry e;
    e.name = std::string(r.bytes(at + kCentralSize, nlen));
    at += kCentralSize + nlen + elen + clen;

    if (flags & 0x1) r.fail("encrypted member " + e.name);
    if (csize == 0xFFFFFFFF || usize == 0xFFFFFFFF) r.fail("zip64 member " + e.name);
    if (r.u32(local) != kLocalSig) r.fail("bad local header for " + e.name);
    const std::size_t data_at = local + kLocalSize + r.u16(local + 26) + r.u16(local + 28);
    const std::string_view raw = r.bytes(data_at, csize);

    e.is_directory = !e.name.empty() && e.name.back() == '/';
    if (!e.is_directory) {
      if (method == 0) {
        if (csize != usize) r.fail("size mismatch for " + e.name);
        e.data = std::string(raw);
      } else if (method == 8) {
        e.data = inflate_raw(r, raw, usize);
      } else {
        r.fail("unsupported compression method " + std::to_string(method));
      }
      const auto actual = crc32(0L, reinterpret_cast<const Bytef*>(e.data.data()), static_cast<uInt>(e.data.size()));
      if (actual != crc) r.fail("crc mismatch for " + e.name);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

bool is_zip_path(const fs::path& path) { return fsutil::has_extension_ci(path, ".zip"); }

namespace {

// Rejects absolute names and parent traversal.
bool safe_member_name(const std::string& name) {
  if (name.empty() || name.front() == '/' || name.find('\\') != std::string::npos) return false;
  for (const auto& part : fs::path(name)) {
    if (part == "..") return false;
  }
  return true;
}

}  // namespace

UnpackReport unpack_archives(const fs::path& root, int max_depth) {
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
  UnpackReport report;

  std::vector<fs::path> initial;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (de.is_regular_file() && is_zip_path(de.path())) initial.push_back(de.path());
  }
  std::sort(initial.begin(), initial.end());

  std::deque<std::pair<fs::path, int>> queue;
  for (auto& p : initial) queue.emplace_back(std::move(p), 1);

  while (!queue.empty()) {
    auto [path, depth] = std::move(queue.front());
    queue.pop_front();
    if (depth > max_depth) throw ArchiveDepthError(path.string(), depth);

    std::vector<ZipEntry> entries;
    try {
      entries = read_zip(path);
    } catch (const Error& e) {
      report.warnings.push_back(e.what());
      continue;
    }
    fs::remove(path);
    ++report.archives_opened;
    report.depth_reached = std::max(report.depth_reached, depth);

    const fs::path dir = path.parent_path();
    for (const ZipEntry& e : entries) {
      if (!safe_member_name(e.name)) {
        report.warnings.push_back("skipped unsafe member '" + e.name + "' in " + path.string());
        continue;
      }
      const fs::path target = dir / fs::path(e.name);
      if (e.is_directory) {
        fs::create_directories(target);
        continue;
      }
      fsutil::write_file_atomic(target, e.data);
      if (is_zip_path(target)) {
        queue.emplace_back(target, depth + 1);
      } else {
        ++report.files_produced;
      }
    }
  }
  return report;
}

}  // namespace pseudomine::archive
