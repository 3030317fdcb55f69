#include "pseudomine/cleaner.hpp"

#include "pseudomine/latex.hpp"
#include "pseudomine/text.hpp"

namespace pseudomine::cleaner {

std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '%') {
      out.push_back(text[i++]);
    } else if (latex::is_escaped(text, i)) {
      out.pop_back();  // the escaping backslash
      ++i;
    } else {
      while (i < text.size() && text[i] != '\n') ++i;
    }
  }
  return out;
}

namespace {

// Next unescaped occurrence of `close` at or after `from`.
std::size_t find_closer(std::string_view text, std::string_view close, std::size_t from) {
  for (std::size_t p = text.find(close, from); p != std::string_view::npos; p = text.find(close, p + 1)) {
    if (!latex::is_escaped(text, p)) return p;
  }
  return std::string_view::npos;
}

}  // namespace

std::string strip_math(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    std::string_view close;
    std::size_t open_len = 0;
    if (c == '\\' && i + 1 < text.size()) {
      const char next = text[i + 1];
      if (next == '\\') {
        out.append("\\\\");
        i += 2;
        continue;
      }
      if (next == '$') {
        i += 2;
        continue;
      }
      if (next == '(') close = "\\)";
      if (next == '[') close = "\\]";
      open_len = 2;
    } else if (c == '$') {
      const bool display = i + 1 < text.size() && text[i + 1] == '$';
      close = display ? "$$" : "$";
      open_len = display ? 2 : 1;
    }
    if (close.empty()) {
      out.push_back(c);
      ++i;
      continue;
    }
    const std::size_t end = close.front() == '\\' ? text.find(close, i + open_len)
                                                  : find_closer(text, close, i + open_len);
    out.push_back(' ');
    i = end == std::string_view::npos ? text.size() : end + close.size();
  }
  return out;
}

namespace {

// Control symbols that only adjust spacing; dropped with their backslash.
bool spacing_symbol(char c) { return c == ',' || c == ';' || c == ':' || c == '!' || c == ' '; }

// Skips a balanced `[...]` at `i`; returns `i` unchanged if there is none.
std::size_t skip_option(std::string_view text, std::size_t i) {
  if (i >= text.size() || text[i] != '[') return i;
  int depth = 0;
  for (std::size_t p = i; p < text.size(); ++p) {
    if (text[p] == '[') ++depth;
    if (text[p] == ']' && --depth == 0) return p + 1;
  }
  return i;
}

}  // namespace

std::string strip_commands(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '{' || c == '}') {
      ++i;
      continue;
    }
    if (c != '\\') {
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + 1 >= text.size()) break;  // trailing lone backslash
    const char next = text[i + 1];
    if (text::is_ascii_alpha(next)) {
      std::size_t j = i + 1;
      while (j < text.size() && text::is_ascii_alpha(text[j])) ++j;
      i = skip_option(text, j);
    } else if (next == '\\') {
      i = skip_option(text, i + 2);
    } else if (spacing_symbol(next) || next == '{' || next == '}') {
      i += 2;
    } else {
      ++i;  // keep the escaped character itself
    }
  }
  return out;
}

namespace {

bool underscore_token(std::string_view token) {
  const std::u32string t = text::to_u32(token);
  switch (t.size()) {
    case 1:
      return t[0] == U'_';
    case 2:
      return t[0] == U'_' || t[1] == U'_';
    case 3:
      return t[1] == U'_';
    default:
      return false;
  }
}

}  // namespace

std::string strip_underscore_tokens(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text::is_space(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !text::is_space(text[j])) ++j;
    const std::string_view token = text.substr(i, j - i);
    if (!underscore_token(token)) out.append(token);
    i = j;
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (text::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string clean(std::string_view text, const CleaningRules& rules) {
  std::string s(text);
  if (rules.remove_comments) s = strip_comments(s);
  if (rules.remove_math) s = strip_math(s);
  if (rules.remove_commands) s = strip_commands(s);
  if (rules.remove_underscore_tokens) s = strip_underscore_tokens(s);
  if (rules.collapse_whitespace) s = collapse_whitespace(s);
  return s;
}

}  // namespace pseudomine::cleaner
