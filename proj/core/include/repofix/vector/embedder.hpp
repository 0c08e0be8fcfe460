#pragma once

#include <memory>
#include <string>
#include <vector>

namespace repofix::vector {

using EmbeddingVector = std::vector<double>;

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dim() const = 0;
    virtual std::string id() const = 0;

    // Throws std::invalid_argument on whitespace-only text, BackendError on
    // remote failure, ConfigError on a dimension mismatch.
    virtual EmbeddingVector embed(const std::string& text) = 0;
};

// Deterministic token-hash bag-of-words embedder for offline runs and tests.
// Tokens are lowercased [A-Za-z0-9_]+ runs; a fixed stop-word set is dropped;
// each token FNV-1a-hashes into one of `dim` buckets with unit weight; the
// result is L2-normalized unless all buckets are zero.
class HashEmbedder : public Embedder {
public:
    explicit HashEmbedder(std::size_t dim = 64);
    std::size_t dim() const override { return dim_; }
    std::string id() const override;
    EmbeddingVector embed(const std::string& text) override;

    static std::size_t bucket_of(const std::string& token, std::size_t dim);
    static bool is_stop_word(const std::string& token);

private:
    std::size_t dim_;
};

}  // namespace repofix::vector
