#include "repofix/llm/backend.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "repofix/util/errors.hpp"
#include "repofix/util/sha256.hpp"

namespace repofix::llm {

std::string fingerprint(Role role, const std::string& prompt, double temperature) {
    char temp_buf[32];
    std::snprintf(temp_buf, sizeof temp_buf, "%.6f", temperature);
    std::string material;
    material.reserve(prompt.size() + 48);
    material += to_string(role);
    material += '\x1f';
    material += prompt;
    material += '\x1f';
    material += temp_buf;
    return util::sha256_hex(material);
}

std::string transcript_line(Role role, const std::string& prompt, double temperature,
                            const CompletionResponse& response) {
    nlohmann::json j = {{"fingerprint", fingerprint(role, prompt, temperature)},
                        {"role", to_string(role)},
                        {"temperature", temperature},
                        {"response",
                         {{"text", response.text},
                          {"prompt_tokens", response.usage.prompt_tokens},
                          {"completion_tokens", response.usage.completion_tokens},
                          {"backend_id", response.backend_id}}}};
    return j.dump();
}

// ---------------------------------------------------------------- live

LiveBackend::LiveBackend(LiveBackendConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (config_.base_url.empty())
        throw ConfigError("live backend requires a base URL (LLM_BASE_URL)");
    if (!transport_) transport_ = make_transport(config_.base_url);
}

CompletionResponse LiveBackend::complete(const CompletionRequest& request) {
    nlohmann::json body = {{"model", config_.model},
                           {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
                           {"temperature", request.temperature},
                           {"max_tokens", request.max_tokens}};
    std::map<std::string, std::string> headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()))
        headers["Authorization"] = std::string("Bearer ") + key;

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0 && config_.retry_backoff_ms > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.retry_backoff_ms * attempt));
        HttpResult res =
            transport_->post("/v1/chat/completions", headers, body.dump(), config_.timeout_seconds);
        if (!res.transport_ok) {
            last_error = "transport error: " + res.error;
            continue;
        }
        if (res.status == 429 || res.status >= 500) {
            last_error = "HTTP " + std::to_string(res.status);
            continue;
        }
        if (res.status != 200)
            throw BackendError("completion endpoint returned HTTP " + std::to_string(res.status) +
                               ": " + res.body.substr(0, 300));
        nlohmann::json parsed = nlohmann::json::parse(res.body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty())
            throw BackendError("malformed completion response: " + res.body.substr(0, 300));
        CompletionResponse out;
        out.text = parsed["choices"][0].at("message").at("content").get<std::string>();
        if (parsed.contains("usage")) {
            out.usage.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
            out.usage.completion_tokens = parsed["usage"].value("completion_tokens", 0);
        }
        out.backend_id = id();
        return out;
    }
    throw BackendError("completion request failed after retries: " + last_error);
}

// -------------------------------------------------------------- replay

ReplayBackend::ReplayBackend(const std::filesystem::path& transcript_path) {
    std::ifstream in(transcript_path);
    if (!in) throw ConfigError("cannot open transcript: " + transcript_path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ConfigError("transcript line " + std::to_string(line_no) + " is not JSON");
        CompletionResponse response;
        const auto& r = j.at("response");
        response.text = r.at("text").get<std::string>();
        response.usage.prompt_tokens = r.value("prompt_tokens", 0);
        response.usage.completion_tokens = r.value("completion_tokens", 0);
        response.backend_id = r.value("backend_id", std::string("replay"));
        entries_[j.at("fingerprint").get<std::string>()].push_back(std::move(response));
    }
}

CompletionResponse ReplayBackend::complete(const CompletionRequest& request) {
    const std::string fp = fingerprint(request.role, request.prompt, request.temperature);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(fp);
    if (it == entries_.end() || it->second.empty()) throw ReplayMissError(fp);
    CompletionResponse response = std::move(it->second.front());
    it->second.pop_front();
    if (it->second.empty()) entries_.erase(it);
    return response;
}

std::size_t ReplayBackend::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::size_t n = 0;
    for (const auto& [fp, queue] : entries_) n += queue.size();
    return n;
}

// -------------------------------------------------------------- record

RecordBackend::RecordBackend(std::unique_ptr<Backend> inner, std::filesystem::path transcript_path)
    : inner_(std::move(inner)), transcript_path_(std::move(transcript_path)) {
    if (transcript_path_.has_parent_path())
        std::filesystem::create_directories(transcript_path_.parent_path());
}

CompletionResponse RecordBackend::complete(const CompletionRequest& request) {
    CompletionResponse response = inner_->complete(request);
    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(transcript_path_, std::ios::app);
    if (!out) throw Error("cannot append to transcript: " + transcript_path_.string());
    out << transcript_line(request.role, request.prompt, request.temperature, response) << "\n";
    return response;
}

}  // namespace repofix::llm
