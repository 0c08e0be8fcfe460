#pragma once
// Natural-language rendering of one method/function, the unit of vector
// retrieval. One document per function or method unit; classes and
// top-level code produce none.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "repofix/indexer/code_unit.hpp"

namespace repofix::indexer {

struct EmbeddingDocument {
    std::string document;
    std::string file_name;  // repo-relative path
    std::optional<std::string> parent_class;
    std::string unit_qualified_name;
    int unit_start_line = 0;

    bool operator==(const EmbeddingDocument&) const = default;
};

// Instantiates the document template for one unit. Absent docstring,
// decorators or return statements substitute the literal token `None`;
// arguments and decorators render as single-quoted bracketed lists and
// multiple return expressions join with "; ".
std::string render_embedding_text(const CodeUnit& unit);

std::vector<EmbeddingDocument> build_embedding_documents(const FileSchematic& schematic);

void to_json(nlohmann::json& j, const EmbeddingDocument& d);
void from_json(const nlohmann::json& j, EmbeddingDocument& d);

}  // namespace repofix::indexer
