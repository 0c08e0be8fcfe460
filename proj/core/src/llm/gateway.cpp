#include "repofix/llm/gateway.hpp"

namespace repofix::llm {

Gateway::Gateway(std::shared_ptr<Backend> backend, CallSink sink)
    : backend_(std::move(backend)), sink_(std::move(sink)) {
    if (!backend_) throw ConfigError("gateway requires a backend");
}

std::string retry_section(const std::string& diagnostic) {
    return "\n\nprevious attempt failed because:\n" + diagnostic + "\n";
}

CompletionResponse Gateway::complete_logged(const CompletionRequest& request, int attempt) {
    CompletionResponse response = backend_->complete(request);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        total_usage_.prompt_tokens += response.usage.prompt_tokens;
        total_usage_.completion_tokens += response.usage.completion_tokens;
        ++role_calls_[request.role];
    }
    if (sink_) {
        CallRecord record;
        record.role = request.role;
        record.temperature = request.temperature;
        record.attempt = attempt;
        record.prompt = request.prompt;
        record.response_text = response.text;
        record.usage = response.usage;
        sink_(record);
    }
    return response;
}

CompletionResponse Gateway::complete(const CompletionRequest& request) {
    return complete_logged(request, 1);
}

ParsedCompletion Gateway::complete_with_retry(const CompletionRequest& request, JsonShape shape,
                                              int budget, const Validator& validator) {
    std::string prompt = request.prompt;
    std::string last_diagnostic;
    for (int attempt = 1; attempt <= budget + 1; ++attempt) {
        CompletionRequest attempt_request = request;
        attempt_request.prompt = prompt;
        CompletionResponse response = complete_logged(attempt_request, attempt);

        ParseOutcome outcome = parse_structured(response.text, shape);
        std::string diagnostic;
        if (!outcome.ok()) {
            diagnostic = outcome.error;
        } else if (validator) {
            diagnostic = validator(*outcome.value);
        }
        if (diagnostic.empty()) return {*outcome.value, attempt};

        last_diagnostic = diagnostic;
        prompt += retry_section(diagnostic);
    }
    throw StructuredOutputError("structured output failed after " + std::to_string(budget + 1) +
                                " attempt(s) for role " + to_string(request.role) + ": " +
                                last_diagnostic);
}

TokenUsage Gateway::total_usage() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return total_usage_;
}

int Gateway::calls_for_role(Role role) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = role_calls_.find(role);
    return it == role_calls_.end() ? 0 : it->second;
}

}  // namespace repofix::llm
