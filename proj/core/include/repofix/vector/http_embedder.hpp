#pragma once
// Remote embedding backend speaking a plain embeddings HTTP contract:
// POST {base_url}/v1/embeddings {"model": ..., "input": "..."} ->
// {"data": [{"embedding": [...]}]}. The API key is read from the
// EMBEDDER_API_KEY environment variable.

#include <string>

#include "repofix/vector/embedder.hpp"

namespace repofix::vector {

struct HttpEmbedderConfig {
    std::string base_url;  // e.g. http://localhost:9200
    std::string model;
    std::size_t dim = 0;  // declared dimension, enforced on every response
    std::string api_key_env = "EMBEDDER_API_KEY";
    int max_retries = 2;
    int timeout_seconds = 60;
};

class HttpEmbedder : public Embedder {
public:
    explicit HttpEmbedder(HttpEmbedderConfig config);
    std::size_t dim() const override { return config_.dim; }
    std::string id() const override { return "http:" + config_.model; }
    EmbeddingVector embed(const std::string& text) override;

private:
    HttpEmbedderConfig config_;
};

}  // namespace repofix::vector
