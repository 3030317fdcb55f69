#pragma once

// Lexical helpers shared by the detector, extractor and reference resolver.
// All offsets here are byte offsets into UTF-8 text.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pseudomine::latex {

/// True when the character at `pos` is preceded by an odd run of backslashes.
bool is_escaped(std::string_view text, std::size_t pos);

/// Marks every byte that belongs to a `%` comment (from the unescaped `%`
/// up to, not including, the newline).
std::vector<bool> comment_mask(std::string_view text);

struct EnvToken {
  bool is_begin = true;
  std::size_t pos = 0;  // the backslash
  std::size_t end = 0;  // one past the closing brace
  std::string_view name;
};

/// All `\begin{name}` / `\end{name}` tokens outside comments, in order.
/// Spaces or tabs between the command and the brace are accepted.
std::vector<EnvToken> environment_tokens(std::string_view text, const std::vector<bool>& comments);
std::vector<EnvToken> environment_tokens(std::string_view text);

inline bool is_algorithm_env(std::string_view name) {
  return name == "algorithm" || name == "algorithm*";
}

struct AlgorithmEnvironment {
  EnvToken begin;
  EnvToken end;
  std::size_t max_depth = 1;
  bool starred = false;
};

struct ScanIssue {
  std::size_t pos = 0;
  std::string message;
};

struct AlgorithmScan {
  std::vector<AlgorithmEnvironment> environments;  // outermost only
  std::vector<ScanIssue> issues;
};

/// Pairs algorithm begin/end tokens by depth counting. Starred and unstarred
/// forms belong to the same family. A begin without a matching end is
/// dropped and reported; so is a stray end.
AlgorithmScan scan_algorithm_environments(std::string_view text);

/// A matched `\begin{E}...\end{E}` pair of any name.
struct Environment {
  std::string name;
  std::size_t begin = 0;  // backslash of \begin
  std::size_t end = 0;    // one past the `}` of \end
};

std::vector<Environment> match_environments(std::string_view text);

/// A `\<letters>ref{...}` command, e.g. \ref, \eqref, \algref, \Cref.
struct RefCommand {
  std::size_t pos = 0;
  std::size_t end = 0;
  std::string_view command;  // without the backslash
  std::string_view target;   // brace content, whitespace-trimmed
};

std::vector<RefCommand> ref_commands(std::string_view text);

/// A `\label{...}` command.
struct LabelCommand {
  std::size_t pos = 0;
  std::size_t end = 0;
  std::string_view label;  // whitespace-trimmed
};

std::vector<LabelCommand> label_commands(std::string_view text);

}  // namespace pseudomine::latex
