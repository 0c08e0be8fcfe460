#pragma once
// Structured-output parsing: pull the first JSON value out of a completion
// (tolerating prose and code fences) and validate it against the shape the
// role expects. Failures carry a diagnostic phrased for prompt re-injection.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace repofix::llm {

enum class JsonShape {
    StringList,     // ["query", ...]
    FileSelection,  // {"files": [...], "rationale": "..."}
    LocationList,   // [{"level", "name", "start_line", "end_line"?, "instruction"}, ...]
    CodeObject,     // {"code": "..."}
    Choice,         // {"choice": <int>}
};

const char* shape_description(JsonShape shape);

struct ParseOutcome {
    std::optional<nlohmann::json> value;
    std::string error;

    bool ok() const { return value.has_value(); }
};

// First syntactically valid JSON value embedded in `text`, if any.
std::optional<nlohmann::json> extract_first_json(const std::string& text);

ParseOutcome parse_structured(const std::string& text, JsonShape shape);

}  // namespace repofix::llm
