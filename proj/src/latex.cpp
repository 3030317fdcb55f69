#include "pseudomine/latex.hpp"

#include "pseudomine/text.hpp"

#include <algorithm>

namespace pseudomine::latex {

bool is_escaped(std::string_view text, std::size_t pos) {
  std::size_t run = 0;
  while (pos > 0 && text[pos - 1] == '\\') {
    ++run;
    --pos;
  }
  return run % 2 == 1;
}

std::vector<bool> comment_mask(std::string_view text) {
  std::vector<bool> mask(text.size(), false);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '%' && !is_escaped(text, i)) {
      while (i < text.size() && text[i] != '\n') mask[i++] = true;
    } else {
      ++i;
    }
  }
  return mask;
}

namespace {

constexpr std::size_t kMaxEnvName = 64;

// Parses `\begin` or `\end` at `pos`; fills `tok` on success.
bool parse_env_token(std::string_view text, std::size_t pos, EnvToken& tok) {
  std::string_view rest = text.substr(pos);
  std::size_t i = 0;
  if (rest.starts_with("\\begin")) {
    tok.is_begin = true;
    i = 6;
  } else if (rest.starts_with("\\end")) {
    tok.is_begin = false;
    i = 4;
  } else {
    return false;
  }
  while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
  if (i >= rest.size() || rest[i] != '{') return false;
  const std::size_t name_start = ++i;
  while (i < rest.size() && rest[i] != '}') {
    const char c = rest[i];
    if (c == '{' || c == '\\' || c == '\n' || i - name_start > kMaxEnvName) return false;
    ++i;
  }
  if (i >= rest.size() || i == name_start) return false;
  tok.pos = pos;
  tok.end = pos + i + 1;
  tok.name = rest.substr(name_start, i - name_start);
  return true;
}

}  // namespace

std::vector<EnvToken> environment_tokens(std::string_view text, const std::vector<bool>& comments) {
  std::vector<EnvToken> out;
  std::size_t pos = text.find('\\');
  while (pos != std::string_view::npos) {
    EnvToken tok;
    if (!comments[pos] && !is_escaped(text, pos) && parse_env_token(text, pos, tok)) {
      out.push_back(tok);
      pos = text.find('\\', tok.end);
    } else {
      pos = text.find('\\', pos + 1);
    }
  }
  return out;
}

std::vector<EnvToken> environment_tokens(std::string_view text) {
  return environment_tokens(text, comment_mask(text));
}

AlgorithmScan scan_algorithm_environments(std::string_view text) {
  AlgorithmScan scan;
  std::size_t depth = 0;
  AlgorithmEnvironment current;
  for (const EnvToken& tok : environment_tokens(text)) {
    if (!is_algorithm_env(tok.name)) continue;
    if (tok.is_begin) {
      if (depth == 0) {
        current = AlgorithmEnvironment{};
        current.begin = tok;
        current.starred = tok.name.back() == '*';
      }
      ++depth;
      current.max_depth = std::max(current.max_depth, depth);
    } else if (depth == 0) {
      scan.issues.push_back({tok.pos, "unmatched \\end{" + std::string(tok.name) + "} ignored"});
    } else if (--depth == 0) {
      current.end = tok;
      scan.environments.push_back(current);
    }
  }
  if (depth > 0) {
    scan.issues.push_back({current.begin.pos, "unterminated \\begin{" + std::string(current.begin.name) +
                                                  "} dropped"});
  }
  return scan;
}

std::vector<Environment> match_environments(std::string_view text) {
  std::vector<Environment> out;
  std::vector<EnvToken> stack;
  for (const EnvToken& tok : environment_tokens(text)) {
    if (tok.is_begin) {
      stack.push_back(tok);
      continue;
    }
    // Pop to the nearest begin with the same name; mismatched opens in
    // between are discarded.
    for (std::size_t k = stack.size(); k-- > 0;) {
      if (stack[k].name == tok.name) {
        out.push_back({std::string(tok.name), stack[k].pos, tok.end});
        stack.resize(k);
        break;
      }
    }
  }
  return out;
}

}  // namespace pseudomine::latex

namespace pseudomine::latex {

namespace {

// Parses `{ content }` starting at `i` (optional spaces before the brace).
// Returns the position one past `}` and the trimmed content.
bool parse_braced(std::string_view text, std::size_t i, std::size_t& end, std::string_view& content) {
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  if (i >= text.size() || text[i] != '{') return false;
  const std::size_t close = text.find('}', i + 1);
  if (close == std::string_view::npos) return false;
  std::string_view inner = text.substr(i + 1, close - i - 1);
  if (inner.find('{') != std::string_view::npos) return false;
  content = text::trim(inner);
  end = close + 1;
  return true;
}

}  // namespace

std::vector<RefCommand> ref_commands(std::string_view text) {
  std::vector<RefCommand> out;
  for (std::size_t pos = text.find('\\'); pos != std::string_view::npos; pos = text.find('\\', pos + 1)) {
    if (is_escaped(text, pos)) continue;
    std::size_t i = pos + 1;
    while (i < text.size() && text::is_ascii_alpha(text[i])) ++i;
    std::string_view cmd = text.substr(pos + 1, i - pos - 1);
    if (!cmd.ends_with("ref")) continue;
    RefCommand rc;
    if (!parse_braced(text, i, rc.end, rc.target)) continue;
    rc.pos = pos;
    rc.command = cmd;
    out.push_back(rc);
  }
  return out;
}

std::vector<LabelCommand> label_commands(std::string_view text) {
  std::vector<LabelCommand> out;
  constexpr std::string_view kLabel = "\\label";
  for (std::size_t pos = text.find(kLabel); pos != std::string_view::npos; pos = text.find(kLabel, pos + 1)) {
    if (is_escaped(text, pos)) continue;
    const std::size_t after = pos + kLabel.size();
    if (after < text.size() && text::is_ascii_alpha(text[after])) continue;
    LabelCommand lc;
    if (!parse_braced(text, after, lc.end, lc.label)) continue;
    lc.pos = pos;
    out.push_back(lc);
  }
  return out;
}

}  // namespace pseudomine::latex
