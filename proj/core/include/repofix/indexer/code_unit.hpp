#pragma once
// Per-file structural summary: each top-level class, top-level function and
// class method becomes one CodeUnit with its verbatim header, decorators,
// docstring, return expressions and 1-based line span (decorators included).

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace repofix::indexer {

enum class UnitKind { Function, Method, Class, TopLevel };

const char* to_string(UnitKind kind);
std::optional<UnitKind> unit_kind_from_string(std::string_view s);

struct Arg {
    std::string name;  // includes '*' / '**' prefixes for splat parameters
    std::optional<std::string> annotation;
    std::optional<std::string> default_value;

    bool operator==(const Arg&) const = default;
};

struct CodeUnit {
    UnitKind kind = UnitKind::Function;
    std::string name;            // empty for top_level
    std::string qualified_name;  // "Class.method" for methods, else name
    std::vector<Arg> args;
    std::string signature;  // verbatim, from def/class keyword through ':'
    std::vector<std::string> decorators;
    std::optional<std::string> docstring;  // verbatim source slice, quotes included
    std::vector<std::string> return_statements;
    int start_line = 0;  // 1-based inclusive; first decorator line if any
    int end_line = 0;
    std::optional<std::string> parent_class;

    std::vector<std::string> arg_names() const;
    bool operator==(const CodeUnit&) const = default;
};

struct FileSchematic {
    std::string path;  // repo-relative
    std::vector<CodeUnit> units;
    bool parse_ok = true;
    std::optional<std::string> parse_error;
};

void to_json(nlohmann::json& j, const Arg& a);
void from_json(const nlohmann::json& j, Arg& a);
void to_json(nlohmann::json& j, const CodeUnit& u);
void from_json(const nlohmann::json& j, CodeUnit& u);
void to_json(nlohmann::json& j, const FileSchematic& s);
void from_json(const nlohmann::json& j, FileSchematic& s);

}  // namespace repofix::indexer
