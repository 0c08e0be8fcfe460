#pragma once
// Role prompt templates live under core/templates/ and are embedded at build
// time. Placeholders use {{name}} syntax; rendering substitutes each exactly
// once and rejects unresolved placeholders.

#include <map>
#include <string>

#include "repofix/llm/types.hpp"

namespace repofix::llm {

const std::string& template_text(Role role);

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values);

std::string render_role(Role role, const std::map<std::string, std::string>& values);

}  // namespace repofix::llm
