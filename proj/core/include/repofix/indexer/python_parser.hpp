#pragma once

#include <string>
#include <string_view>

#include "repofix/indexer/code_unit.hpp"

namespace repofix::indexer {

// Parses full Python source into a FileSchematic. Never throws on bad input:
// syntactically invalid source yields parse_ok=false with a diagnostic.
// Nested functions and nested classes are folded into the enclosing unit's
// span and not listed separately.
FileSchematic parse_file(const std::string& path, std::string_view source);

// True when `source` parses cleanly at module scope (used to vet generated
// replacement code before splicing).
bool parses_clean(std::string_view source, std::string* diagnostic = nullptr);

}  // namespace repofix::indexer
