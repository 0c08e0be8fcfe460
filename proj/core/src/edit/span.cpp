#include "repofix/edit/span.hpp"

#include <algorithm>
#include <cstdlib>

#include "repofix/indexer/python_parser.hpp"
#include "repofix/util/strings.hpp"

namespace repofix::edit {

using indexer::CodeUnit;
using indexer::UnitKind;
using localize::LocationLevel;
using localize::RelevantLocation;

namespace {

bool kind_matches(LocationLevel level, UnitKind kind) {
    if (level == LocationLevel::Class) return kind == UnitKind::Class;
    // "method" level covers methods and free functions alike
    return kind == UnitKind::Method || kind == UnitKind::Function;
}

bool name_matches(const RelevantLocation& location, const CodeUnit& unit) {
    return unit.qualified_name == location.name || unit.name == location.name;
}

// Leading whitespace of the first non-decorator line of the unit, i.e. the
// def/class line itself.
std::string definition_indent(const std::vector<std::string>& lines, const CodeUnit& unit) {
    int def_line = unit.start_line + static_cast<int>(unit.decorators.size());
    // Decorators may span multiple lines; walk forward to the line whose
    // first token starts the signature.
    for (int i = unit.start_line; i <= unit.end_line && i <= static_cast<int>(lines.size()); ++i) {
        const std::string& line = lines[static_cast<std::size_t>(i - 1)];
        std::string trimmed = util::trim(line);
        if (util::starts_with(trimmed, "def ") || util::starts_with(trimmed, "async def ") ||
            util::starts_with(trimmed, "class "))
            return line.substr(0, util::leading_whitespace(line));
    }
    if (def_line >= 1 && def_line <= static_cast<int>(lines.size())) {
        const std::string& line = lines[static_cast<std::size_t>(def_line - 1)];
        return line.substr(0, util::leading_whitespace(line));
    }
    return {};
}

}  // namespace

std::string extract_span(const std::string& content, int span_start, int span_end) {
    bool ends_nl = false;
    auto lines = util::split_lines(content, &ends_nl);
    std::string out;
    for (int i = span_start; i <= span_end && i <= static_cast<int>(lines.size()); ++i) {
        out += lines[static_cast<std::size_t>(i - 1)];
        if (i < span_end || i < static_cast<int>(lines.size()) || ends_nl) out += '\n';
    }
    return out;
}

Result<EditTarget> resolve_span(const std::string& content, const RelevantLocation& location) {
    bool ends_nl = false;
    auto lines = util::split_lines(content, &ends_nl);
    const int line_count = static_cast<int>(lines.size());

    if (location.level == LocationLevel::TopLevel) {
        int start = std::max(1, location.start_line);
        int end = std::min(line_count, location.end_line);
        if (line_count == 0 || start > end)
            return Result<EditTarget>::failure("top_level span (" +
                                               std::to_string(location.start_line) + ", " +
                                               std::to_string(location.end_line) +
                                               ") is outside the file bounds");
        auto schematic = indexer::parse_file(location.file, content);
        for (const auto& unit : schematic.units) {
            if (start <= unit.end_line && unit.start_line <= end)
                return Result<EditTarget>::failure(
                    "top_level span (" + std::to_string(start) + ", " + std::to_string(end) +
                    ") intersects the span of " + to_string(unit.kind) + " " +
                    unit.qualified_name + " (" + std::to_string(unit.start_line) + ", " +
                    std::to_string(unit.end_line) + "); top_level edits must target code outside "
                    "every class and function");
        }
        EditTarget target;
        target.location = location;
        target.span_start = start;
        target.span_end = end;
        const std::string& first = lines[static_cast<std::size_t>(start - 1)];
        target.indent = first.substr(0, util::leading_whitespace(first));
        return Result<EditTarget>::success(std::move(target));
    }

    auto schematic = indexer::parse_file(location.file, content);
    if (!schematic.parse_ok)
        return Result<EditTarget>::failure(
            "file does not parse, cannot resolve named locations: " +
            schematic.parse_error.value_or("unknown parse error"));

    std::vector<const CodeUnit*> by_name;
    for (const auto& unit : schematic.units) {
        if (kind_matches(location.level, unit.kind) && name_matches(location, unit))
            by_name.push_back(&unit);
    }
    if (by_name.empty())
        return Result<EditTarget>::failure("no " + std::string(to_string(location.level)) +
                                           " named \"" + location.name + "\" exists in " +
                                           location.file);

    const CodeUnit* match = nullptr;
    for (const auto* unit : by_name) {
        if (unit->start_line == location.start_line) {
            match = unit;
            break;
        }
    }
    if (!match) {
        // tolerate off-by-a-couple line counting when it is unambiguous
        std::vector<const CodeUnit*> near;
        for (const auto* unit : by_name) {
            if (std::abs(unit->start_line - location.start_line) <= 2) near.push_back(unit);
        }
        if (near.size() == 1) {
            match = near.front();
        } else {
            std::string starts;
            for (const auto* unit : by_name) {
                if (!starts.empty()) starts += ", ";
                starts += std::to_string(unit->start_line);
            }
            return Result<EditTarget>::failure(
                "\"" + location.name + "\" exists at start line(s) " + starts +
                " but the location says " + std::to_string(location.start_line) +
                "; give the exact start line");
        }
    }

    EditTarget target;
    target.location = location;
    target.span_start = match->start_line;
    target.span_end = match->end_line;
    target.indent = definition_indent(lines, *match);
    return Result<EditTarget>::success(std::move(target));
}

}  // namespace repofix::edit
