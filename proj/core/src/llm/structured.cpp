#include "repofix/llm/structured.hpp"

namespace repofix::llm {

namespace {

// Finds the end of a balanced JSON-ish value starting at `start` (which must
// be '{' or '['), honoring string literals and escapes. Returns npos when
// unbalanced.
std::size_t balanced_end(const std::string& text, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ']') {
            --depth;
            if (depth == 0) return i;
            if (depth < 0) return std::string::npos;
        }
    }
    return std::string::npos;
}

bool is_string_array(const nlohmann::json& j) {
    if (!j.is_array()) return false;
    for (const auto& item : j)
        if (!item.is_string()) return false;
    return true;
}

std::string validate_location_list(const nlohmann::json& j) {
    if (!j.is_array()) return "expected a JSON array of location objects";
    if (j.empty()) return "expected at least one location object";
    for (const auto& item : j) {
        if (!item.is_object()) return "every location must be a JSON object";
        if (!item.contains("level") || !item["level"].is_string())
            return "every location needs a string \"level\" of top_level, class or method";
        const std::string level = item["level"];
        if (level != "top_level" && level != "class" && level != "method")
            return "location \"level\" must be one of top_level, class, method (got \"" + level +
                   "\")";
        if (!item.contains("start_line") || !item["start_line"].is_number_integer())
            return "every location needs an integer \"start_line\"";
        if (level == "top_level" &&
            (!item.contains("end_line") || !item["end_line"].is_number_integer()))
            return "top_level locations need an integer \"end_line\"";
        if (level != "top_level" && (!item.contains("name") || !item["name"].is_string() ||
                                     item["name"].get<std::string>().empty()))
            return "class and method locations need a non-empty string \"name\"";
        if (!item.contains("instruction") || !item["instruction"].is_string() ||
            item["instruction"].get<std::string>().empty())
            return "every location needs a non-empty string \"instruction\"";
    }
    return {};
}

}  // namespace

const char* shape_description(JsonShape shape) {
    switch (shape) {
        case JsonShape::StringList:
            return "a JSON array of strings";
        case JsonShape::FileSelection:
            return "a JSON object {\"files\": [paths], \"rationale\": \"...\"}";
        case JsonShape::LocationList:
            return "a JSON array of {\"level\", \"name\", \"start_line\", \"end_line\"?, "
                   "\"instruction\"} objects";
        case JsonShape::CodeObject:
            return "a JSON object {\"code\": \"<full replacement source>\"}";
        case JsonShape::Choice:
            return "a JSON object {\"choice\": <candidate id>}";
    }
    return "a JSON value";
}

std::optional<nlohmann::json> extract_first_json(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{' && text[i] != '[') continue;
        std::size_t end = balanced_end(text, i);
        if (end == std::string::npos) continue;
        auto parsed = nlohmann::json::parse(text.substr(i, end - i + 1), nullptr, false);
        if (!parsed.is_discarded()) return parsed;
    }
    return std::nullopt;
}

ParseOutcome parse_structured(const std::string& text, JsonShape shape) {
    auto value = extract_first_json(text);
    if (!value)
        return {std::nullopt,
                std::string("no JSON value found in the response; expected ") +
                    shape_description(shape)};

    const nlohmann::json& j = *value;
    std::string error;
    switch (shape) {
        case JsonShape::StringList:
            if (!is_string_array(j))
                error = std::string("expected ") + shape_description(shape) + ", got " +
                        std::string(j.type_name());
            break;
        case JsonShape::FileSelection:
            if (!j.is_object() || !j.contains("files") || !is_string_array(j["files"]))
                error = std::string("expected ") + shape_description(shape);
            break;
        case JsonShape::LocationList:
            error = validate_location_list(j);
            break;
        case JsonShape::CodeObject:
            if (!j.is_object() || !j.contains("code") || !j["code"].is_string())
                error = std::string("expected ") + shape_description(shape);
            break;
        case JsonShape::Choice:
            if (!j.is_object() || !j.contains("choice") || !j["choice"].is_number_integer())
                error = std::string("expected ") + shape_description(shape);
            break;
    }
    if (!error.empty()) return {std::nullopt, error};
    return {std::optional<nlohmann::json>(j), {}};
}

}  // namespace repofix::llm
