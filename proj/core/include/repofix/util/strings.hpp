#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace repofix::util {

std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Splits into lines on '\n'; a trailing newline does not produce an empty
// final element. `ends_with_newline` reports whether the input had one.
std::vector<std::string> split_lines(std::string_view text, bool* ends_with_newline = nullptr);

// Joins lines with '\n', appending a final newline when requested.
std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view s);

// Lowercased runs of [A-Za-z0-9_]; everything else separates tokens.
std::vector<std::string> tokenize_words(std::string_view text);

// Length of the leading run of spaces/tabs.
std::size_t leading_whitespace(std::string_view line);

bool is_blank(std::string_view line);

// Removes the longest common leading whitespace from all non-blank lines.
std::string dedent(std::string_view text);

// Single-quoted string with backslash escaping of '\' and '\''. Mirrors the
// quoting rule used when rendering argument and decorator lists.
std::string quote_single(std::string_view s);

// Renders ["a", "b"] as ['a', 'b']; empty input renders as [].
std::string render_string_list(const std::vector<std::string>& items);

}  // namespace repofix::util
