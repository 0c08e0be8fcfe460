#include "repofix/indexer/embedding_doc.hpp"

#include "repofix/util/strings.hpp"

namespace repofix::indexer {

std::string render_embedding_text(const CodeUnit& unit) {
    const std::string args = util::render_string_list(unit.arg_names());
    const std::string docstring = unit.docstring ? *unit.docstring : "None";
    const std::string decorators =
        unit.decorators.empty() ? "None" : util::render_string_list(unit.decorators);
    const std::string returns = unit.return_statements.empty()
                                    ? "None"
                                    : util::join(unit.return_statements, "; ");

    std::string out;
    out.reserve(128 + unit.signature.size() + docstring.size());
    out += "Method ";
    out += unit.name;
    out += " with arguments ";
    out += args;
    out += " have signature as ";
    out += unit.signature;
    out += " is described using ";
    out += docstring;
    out += " also have ";
    out += decorators;
    out += " as decorators and return statement described as ";
    out += returns;
    out += ".";
    return out;
}

std::vector<EmbeddingDocument> build_embedding_documents(const FileSchematic& schematic) {
    std::vector<EmbeddingDocument> docs;
    if (!schematic.parse_ok) return docs;
    for (const auto& unit : schematic.units) {
        if (unit.kind != UnitKind::Function && unit.kind != UnitKind::Method) continue;
        EmbeddingDocument doc;
        doc.document = render_embedding_text(unit);
        doc.file_name = schematic.path;
        doc.parent_class = unit.parent_class;
        doc.unit_qualified_name = unit.qualified_name;
        doc.unit_start_line = unit.start_line;
        docs.push_back(std::move(doc));
    }
    return docs;
}

void to_json(nlohmann::json& j, const EmbeddingDocument& d) {
    j = nlohmann::json{
        {"document", d.document},
        {"file_name", d.file_name},
        {"parent_class", d.parent_class ? nlohmann::json(*d.parent_class) : nlohmann::json(nullptr)},
        {"unit_ref", {{"qualified_name", d.unit_qualified_name}, {"start_line", d.unit_start_line}}}};
}

void from_json(const nlohmann::json& j, EmbeddingDocument& d) {
    d.document = j.at("document").get<std::string>();
    d.file_name = j.at("file_name").get<std::string>();
    if (j.at("parent_class").is_null())
        d.parent_class = std::nullopt;
    else
        d.parent_class = j.at("parent_class").get<std::string>();
    d.unit_qualified_name = j.at("unit_ref").at("qualified_name").get<std::string>();
    d.unit_start_line = j.at("unit_ref").at("start_line").get<int>();
}

}  // namespace repofix::indexer
