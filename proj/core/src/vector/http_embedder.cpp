#include "repofix/vector/http_embedder.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "repofix/util/errors.hpp"
#include "repofix/util/strings.hpp"

namespace repofix::vector {

HttpEmbedder::HttpEmbedder(HttpEmbedderConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw ConfigError("http embedder requires a base URL");
    if (config_.dim == 0) throw ConfigError("http embedder requires a declared dimension");
}

EmbeddingVector HttpEmbedder::embed(const std::string& text) {
    if (util::trim(text).empty())
        throw std::invalid_argument("cannot embed empty text");

    nlohmann::json body = {{"model", config_.model}, {"input", text}};
    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()))
        headers.emplace("Authorization", std::string("Bearer ") + key);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
        httplib::Client client(config_.base_url);
        client.set_read_timeout(config_.timeout_seconds, 0);
        auto res = client.Post("/v1/embeddings", headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "embedding endpoint returned HTTP " + std::to_string(res->status);
            continue;
        }
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("data") || parsed["data"].empty())
            throw BackendError("malformed embedding response: " + res->body.substr(0, 200));
        auto vec = parsed["data"][0].at("embedding").get<EmbeddingVector>();
        if (vec.size() != config_.dim)
            throw ConfigError("embedder returned dimension " + std::to_string(vec.size()) +
                              ", expected " + std::to_string(config_.dim));
        return vec;
    }
    throw BackendError("embedding request failed after retries: " + last_error);
}

}  // namespace repofix::vector
