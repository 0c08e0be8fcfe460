#pragma once
// Exact textual splice: replacement code (written at column 0) is
// re-indented to the target's indentation and substituted for the resolved
// span. Bytes outside the span are preserved verbatim.

#include <string>

#include "repofix/edit/span.hpp"
#include "repofix/util/result.hpp"

namespace repofix::edit {

struct GeneratedCode {
    std::string text;
    double temperature = 0.0;
    int attempt = 1;
};

struct SpliceResult {
    std::string new_content;
    int changed_start = 0;  // line range of the replacement block
    int changed_end = 0;
    bool syntax_ok = false;
    std::string diagnostic;  // re-parse failure, when syntax_ok is false
};

// Fails (pre-splice) when the replacement does not parse at column 0; the
// diagnostic feeds the generation retry. A successful splice re-parses the
// whole file and reports syntax_ok.
Result<SpliceResult> splice(const std::string& content, const EditTarget& target,
                            const GeneratedCode& replacement);

// Reads the element's file inside `workspace_root`, resolves the location
// against current content, splices, and writes back only when the result
// parses. The file is untouched on any failure.
Result<SpliceResult> apply_plan_element(const std::string& workspace_root,
                                        const localize::PlanElement& element,
                                        const GeneratedCode& code);

// Prefixes every non-blank line with `indent` (the replacement's own
// relative indentation is preserved).
std::string reindent(const std::string& code, const std::string& indent);

}  // namespace repofix::edit
