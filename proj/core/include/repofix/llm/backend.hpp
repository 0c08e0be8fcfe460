#pragma once
// Completion backends: live HTTP (chat-completions contract), replay from a
// recorded transcript, and record (live + transcript append). Replay lookup
// is exact-match on the request fingerprint; a miss is an error, never a
// silent live call.

#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "repofix/llm/transport.hpp"
#include "repofix/llm/types.hpp"

namespace repofix::llm {

class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
    virtual std::string id() const = 0;
};

struct LiveBackendConfig {
    std::string base_url;
    std::string model;
    std::string api_key_env = "LLM_API_KEY";
    int max_retries = 2;  // transport-level retries
    int retry_backoff_ms = 200;
    int timeout_seconds = 120;
};

class LiveBackend : public Backend {
public:
    explicit LiveBackend(LiveBackendConfig config,
                         std::shared_ptr<HttpTransport> transport = nullptr);
    CompletionResponse complete(const CompletionRequest& request) override;
    std::string id() const override { return "live:" + config_.model; }

private:
    LiveBackendConfig config_;
    std::shared_ptr<HttpTransport> transport_;
};

class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const std::filesystem::path& transcript_path);
    CompletionResponse complete(const CompletionRequest& request) override;
    std::string id() const override { return "replay"; }
    std::size_t remaining() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::deque<CompletionResponse>> entries_;
};

class RecordBackend : public Backend {
public:
    RecordBackend(std::unique_ptr<Backend> inner, std::filesystem::path transcript_path);
    CompletionResponse complete(const CompletionRequest& request) override;
    std::string id() const override { return "record:" + inner_->id(); }

private:
    std::mutex mutex_;
    std::unique_ptr<Backend> inner_;
    std::filesystem::path transcript_path_;
};

// One transcript line; also used by tests to script replay scenarios.
std::string transcript_line(Role role, const std::string& prompt, double temperature,
                            const CompletionResponse& response);

}  // namespace repofix::llm
