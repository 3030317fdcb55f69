#pragma once

#include <string>
#include <string_view>

namespace pseudomine::cleaner {

struct CleaningRules {
  bool remove_comments = true;
  bool remove_math = true;
  bool remove_commands = true;
  bool remove_underscore_tokens = true;
  bool collapse_whitespace = true;
};

/// Strips LaTeX machinery from a snippet, in this order:
///  1. `%` comments to end of line (an escaped `\%` is dropped as well);
///  2. math in `$...$`, `$$...$$`, `\(...\)`, `\[...\]` becomes one space,
///     an unclosed opener swallows the rest of the text, `\$` is dropped;
///  3. `\command` tokens and their `[...]` option vanish, braces are dropped
///     while their content stays, remaining backslashes go;
///  4. whitespace-delimited tokens shaped `X_Y`, `X_`, `_Y` or `_`
///     (X, Y single characters) are removed;
///  5. whitespace runs collapse to one space and the ends are trimmed.
/// With the default rules the result is a fixed point of clean().
std::string clean(std::string_view text, const CleaningRules& rules = {});

std::string strip_comments(std::string_view text);
std::string strip_math(std::string_view text);
std::string strip_commands(std::string_view text);
std::string strip_underscore_tokens(std::string_view text);
std::string collapse_whitespace(std::string_view text);

}  // namespace pseudomine::cleaner
