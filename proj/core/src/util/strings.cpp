#include "repofix/util/strings.hpp"

#include <algorithm>
#include <cctype>

namespace repofix::util {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

std::vector<std::string> split_lines(std::string_view text, bool* ends_with_newline) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            if (ends_with_newline) *ends_with_newline = !text.empty() && start == text.size();
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
        if (start == text.size()) {
            if (ends_with_newline) *ends_with_newline = true;
            break;
        }
    }
    if (text.empty() && ends_with_newline) *ends_with_newline = false;
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out += lines[i];
        if (i + 1 < lines.size()) out += '\n';
    }
    if (trailing_newline && !lines.empty()) out += '\n';
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::size_t leading_whitespace(std::string_view line) {
    std::size_t n = 0;
    while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
    return n;
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string dedent(std::string_view text) {
    bool ends_nl = false;
    auto lines = split_lines(text, &ends_nl);
    std::size_t common = std::string::npos;
    for (const auto& line : lines) {
        if (is_blank(line)) continue;
        common = std::min(common, leading_whitespace(line));
        if (common == 0) break;
    }
    if (common == std::string::npos || common == 0)
        return std::string(text);
    for (auto& line : lines) {
        if (line.size() >= common)
            line.erase(0, common);
        else if (is_blank(line))
            line.clear();
    }
    return join_lines(lines, ends_nl);
}

std::string quote_single(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\\' || c == '\'') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

std::string render_string_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += quote_single(items[i]);
    }
    out += "]";
    return out;
}

}  // namespace repofix::util
