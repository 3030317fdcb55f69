#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pseudomine::text {

enum class Encoding { Utf8, Latin1 };

const char* encoding_name(Encoding e);

struct Decoded {
  std::string text;  // always UTF-8
  Encoding encoding = Encoding::Utf8;
};

bool is_valid_utf8(std::string_view bytes);

/// Decodes raw file bytes. Valid UTF-8 is kept verbatim; anything else is
/// read as Latin-1, one code point per byte.
Decoded decode_bytes(std::string_view bytes);

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

/// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t scalar_count(std::string_view utf8);

/// Maps between byte offsets and scalar-value offsets of one UTF-8 string.
class OffsetMap {
 public:
  explicit OffsetMap(std::string_view utf8);

  std::size_t to_scalar(std::size_t byte_offset) const;
  std::size_t to_byte(std::size_t scalar_offset) const;
  std::size_t size() const { return starts_.size() - 1; }

 private:
  std::vector<std::size_t> starts_;  // byte offset of each code point, plus end
};

inline bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

}  // namespace pseudomine::text
