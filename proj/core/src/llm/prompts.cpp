#include "repofix/llm/prompts.hpp"

#include <cctype>

#include "repofix/util/errors.hpp"

namespace repofix::llm {

namespace detail {
extern const char* const kTemplateQueryGeneration;
extern const char* const kTemplateFileLocator;
extern const char* const kTemplatePreassimilator;
extern const char* const kTemplateCoderParser;
extern const char* const kTemplateCodeGeneration;
extern const char* const kTemplateRefinement;
extern const char* const kTemplateFinalSelection;
}  // namespace detail

const char* to_string(Role role) {
    switch (role) {
        case Role::QueryGeneration: return "query_generation";
        case Role::FileLocator: return "file_locator";
        case Role::Preassimilator: return "preassimilator";
        case Role::CoderParser: return "coder_parser";
        case Role::CodeGeneration: return "code_generation";
        case Role::Refinement: return "refinement";
        case Role::FinalSelection: return "final_selection";
    }
    return "unknown";
}

std::optional<Role> role_from_string(std::string_view s) {
    if (s == "query_generation") return Role::QueryGeneration;
    if (s == "file_locator") return Role::FileLocator;
    if (s == "preassimilator") return Role::Preassimilator;
    if (s == "coder_parser") return Role::CoderParser;
    if (s == "code_generation") return Role::CodeGeneration;
    if (s == "refinement") return Role::Refinement;
    if (s == "final_selection") return Role::FinalSelection;
    return std::nullopt;
}

const std::string& template_text(Role role) {
    static const std::string query_generation(detail::kTemplateQueryGeneration);
    static const std::string file_locator(detail::kTemplateFileLocator);
    static const std::string preassimilator(detail::kTemplatePreassimilator);
    static const std::string coder_parser(detail::kTemplateCoderParser);
    static const std::string code_generation(detail::kTemplateCodeGeneration);
    static const std::string refinement(detail::kTemplateRefinement);
    static const std::string final_selection(detail::kTemplateFinalSelection);
    switch (role) {
        case Role::QueryGeneration: return query_generation;
        case Role::FileLocator: return file_locator;
        case Role::Preassimilator: return preassimilator;
        case Role::CoderParser: return coder_parser;
        case Role::CodeGeneration: return code_generation;
        case Role::Refinement: return refinement;
        case Role::FinalSelection: return final_selection;
    }
    return query_generation;
}

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
            std::size_t name_start = i + 2;
            std::size_t j = name_start;
            while (j < tmpl.size() &&
                   (std::isalnum(static_cast<unsigned char>(tmpl[j])) || tmpl[j] == '_'))
                ++j;
            if (j > name_start && j + 1 < tmpl.size() && tmpl[j] == '}' && tmpl[j + 1] == '}') {
                const std::string name = tmpl.substr(name_start, j - name_start);
                auto it = values.find(name);
                if (it == values.end())
                    throw ConfigError("template placeholder {{" + name + "}} has no value");
                out += it->second;
                i = j + 2;
                continue;
            }
        }
        out += tmpl[i++];
    }
    return out;
}

std::string render_role(Role role, const std::map<std::string, std::string>& values) {
    return render_template(template_text(role), values);
}

}  // namespace repofix::llm
