#pragma once

#include <string>
#include <vector>

#include "repofix/indexer/code_unit.hpp"

namespace repofix::indexer {

// File Level Schematic Map: a compact structural overview of one or more
// files (classes, methods, args, decorators, docstrings) rendered as
// deterministic JSON for prompt context.
std::string render_schematic_map(const std::vector<FileSchematic>& schematics);

}  // namespace repofix::indexer
