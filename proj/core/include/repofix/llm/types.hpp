#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace repofix::llm {

enum class Role {
    QueryGeneration,
    FileLocator,
    Preassimilator,
    CoderParser,
    CodeGeneration,
    Refinement,
    FinalSelection,
};

const char* to_string(Role role);
std::optional<Role> role_from_string(std::string_view s);

struct CompletionRequest {
    Role role = Role::QueryGeneration;
    std::string prompt;
    double temperature = 0.0;  // [0, 2]
    int max_tokens = 1024;
};

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct CompletionResponse {
    std::string text;
    TokenUsage usage;
    std::string backend_id;
};

// Exact-match replay key: sha256 over (role, prompt, temperature).
std::string fingerprint(Role role, const std::string& prompt, double temperature);

}  // namespace repofix::llm
