#include "repofix/indexer/schematic_map.hpp"

#include <nlohmann/json.hpp>

namespace repofix::indexer {

namespace {

nlohmann::json unit_summary(const CodeUnit& unit) {
    nlohmann::json j;
    j["name"] = unit.name;
    j["start_line"] = unit.start_line;
    j["args"] = unit.arg_names();
    if (!unit.decorators.empty()) j["decorators"] = unit.decorators;
    if (unit.docstring) j["docstring"] = *unit.docstring;
    return j;
}

}  // namespace

std::string render_schematic_map(const std::vector<FileSchematic>& schematics) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& schematic : schematics) {
        nlohmann::json entry;
        entry["file"] = schematic.path;
        if (!schematic.parse_ok) {
            entry["parse_error"] = schematic.parse_error.value_or("unparsed");
            files.push_back(entry);
            continue;
        }
        nlohmann::json classes = nlohmann::json::array();
        nlohmann::json functions = nlohmann::json::array();
        for (const auto& unit : schematic.units) {
            if (unit.kind == UnitKind::Class) {
                nlohmann::json cls;
                cls["name"] = unit.name;
                cls["start_line"] = unit.start_line;
                if (!unit.decorators.empty()) cls["decorators"] = unit.decorators;
                if (unit.docstring) cls["docstring"] = *unit.docstring;
                cls["methods"] = nlohmann::json::array();
                classes.push_back(cls);
            } else if (unit.kind == UnitKind::Method) {
                // methods follow their class in source order
                if (!classes.empty() && unit.parent_class &&
                    classes.back()["name"] == *unit.parent_class)
                    classes.back()["methods"].push_back(unit_summary(unit));
            } else if (unit.kind == UnitKind::Function) {
                functions.push_back(unit_summary(unit));
            }
        }
        entry["classes"] = classes;
        entry["functions"] = functions;
        files.push_back(entry);
    }
    return files.dump(2);
}

}  // namespace repofix::indexer
