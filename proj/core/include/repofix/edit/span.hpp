#pragma once
// Resolves a relevant location against current file content to a concrete
// line span plus the indentation prefix owned by the definition line.

#include <string>

#include "repofix/localize/types.hpp"
#include "repofix/util/result.hpp"

namespace repofix::edit {

struct EditTarget {
    localize::RelevantLocation location;
    int span_start = 0;  // 1-based inclusive; includes decorators
    int span_end = 0;
    std::string indent;  // verbatim leading whitespace of the definition line
};

// Method/class levels re-parse `content` and match (name, start_line); a
// start line within ±2 of exactly one unit with a matching name snaps to it.
// Top-level spans are taken verbatim, clamped to file bounds, and rejected
// when they intersect any unit span. Failures return a diagnostic suitable
// for a location retry.
Result<EditTarget> resolve_span(const std::string& content,
                                const localize::RelevantLocation& location);

// Lines [span_start, span_end] of `content`, newline-terminated unless the
// span reaches an unterminated final line.
std::string extract_span(const std::string& content, int span_start, int span_end);

}  // namespace repofix::edit
