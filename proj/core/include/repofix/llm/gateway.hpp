#pragma once
// Uniform completion interface with structured-output parsing and the
// diagnostic-appending retry mechanism. Every call (including retries) is
// reported to an optional sink for run logging.

#include <functional>
#include <memory>
#include <mutex>

#include "repofix/llm/backend.hpp"
#include "repofix/llm/structured.hpp"
#include "repofix/llm/types.hpp"
#include "repofix/util/errors.hpp"

namespace repofix::llm {

class StructuredOutputError : public Error {
public:
    using Error::Error;
};

struct CallRecord {
    Role role;
    double temperature = 0.0;
    int attempt = 1;  // 1-based
    std::string prompt;
    std::string response_text;
    TokenUsage usage;
};

using CallSink = std::function<void(const CallRecord&)>;

struct ParsedCompletion {
    nlohmann::json value;
    int attempts = 1;  // completions consumed, including the successful one
};

class Gateway {
public:
    explicit Gateway(std::shared_ptr<Backend> backend, CallSink sink = nullptr);

    CompletionResponse complete(const CompletionRequest& request);

    // Returns a non-empty diagnostic to reject the value and trigger a retry.
    using Validator = std::function<std::string(const nlohmann::json&)>;

    // On parse/validation failure, re-issues the request with the diagnostic
    // appended under a fixed "previous attempt failed because:" section, up
    // to `budget` extra attempts. Throws StructuredOutputError with the last
    // diagnostic once the budget is exhausted.
    ParsedCompletion complete_with_retry(const CompletionRequest& request, JsonShape shape,
                                         int budget, const Validator& validator = nullptr);

    TokenUsage total_usage() const;
    int calls_for_role(Role role) const;
    Backend& backend() { return *backend_; }

private:
    CompletionResponse complete_logged(const CompletionRequest& request, int attempt);

    std::shared_ptr<Backend> backend_;
    CallSink sink_;
    mutable std::mutex mutex_;
    TokenUsage total_usage_;
    std::map<Role, int> role_calls_;
};

// Shared prompt fragment: the retry section appended after a failed attempt.
std::string retry_section(const std::string& diagnostic);

}  // namespace repofix::llm
