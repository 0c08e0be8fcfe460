#include "repofix/indexer/code_unit.hpp"

namespace repofix::indexer {

const char* to_string(UnitKind kind) {
    switch (kind) {
        case UnitKind::Function: return "function";
        case UnitKind::Method: return "method";
        case UnitKind::Class: return "class";
        case UnitKind::TopLevel: return "top_level";
    }
    return "function";
}

std::optional<UnitKind> unit_kind_from_string(std::string_view s) {
    if (s == "function") return UnitKind::Function;
    if (s == "method") return UnitKind::Method;
    if (s == "class") return UnitKind::Class;
    if (s == "top_level") return UnitKind::TopLevel;
    return std::nullopt;
}

std::vector<std::string> CodeUnit::arg_names() const {
    std::vector<std::string> names;
    names.reserve(args.size());
    for (const auto& a : args) names.push_back(a.name);
    return names;
}

static nlohmann::json opt_str(const std::optional<std::string>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
}

static std::optional<std::string> opt_from(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<std::string>();
}

void to_json(nlohmann::json& j, const Arg& a) {
    j = nlohmann::json{{"name", a.name},
                       {"annotation", opt_str(a.annotation)},
                       {"default", opt_str(a.default_value)}};
}

void from_json(const nlohmann::json& j, Arg& a) {
    a.name = j.at("name").get<std::string>();
    a.annotation = opt_from(j.at("annotation"));
    a.default_value = opt_from(j.at("default"));
}

void to_json(nlohmann::json& j, const CodeUnit& u) {
    j = nlohmann::json{{"kind", to_string(u.kind)},
                       {"name", u.name},
                       {"qualified_name", u.qualified_name},
                       {"args", u.args},
                       {"signature", u.signature},
                       {"decorators", u.decorators},
                       {"docstring", opt_str(u.docstring)},
                       {"return_statements", u.return_statements},
                       {"span", {u.start_line, u.end_line}},
                       {"parent_class", opt_str(u.parent_class)}};
}

void from_json(const nlohmann::json& j, CodeUnit& u) {
    auto kind = unit_kind_from_string(j.at("kind").get<std::string>());
    u.kind = kind.value_or(UnitKind::Function);
    u.name = j.at("name").get<std::string>();
    u.qualified_name = j.at("qualified_name").get<std::string>();
    u.args = j.at("args").get<std::vector<Arg>>();
    u.signature = j.at("signature").get<std::string>();
    u.decorators = j.at("decorators").get<std::vector<std::string>>();
    u.docstring = opt_from(j.at("docstring"));
    u.return_statements = j.at("return_statements").get<std::vector<std::string>>();
    u.start_line = j.at("span").at(0).get<int>();
    u.end_line = j.at("span").at(1).get<int>();
    u.parent_class = opt_from(j.at("parent_class"));
}

void to_json(nlohmann::json& j, const FileSchematic& s) {
    j = nlohmann::json{{"path", s.path},
                       {"units", s.units},
                       {"parse_ok", s.parse_ok},
                       {"parse_error", opt_str(s.parse_error)}};
}

void from_json(const nlohmann::json& j, FileSchematic& s) {
    s.path = j.at("path").get<std::string>();
    s.units = j.at("units").get<std::vector<CodeUnit>>();
    s.parse_ok = j.at("parse_ok").get<bool>();
    s.parse_error = opt_from(j.at("parse_error"));
}

}  // namespace repofix::indexer
