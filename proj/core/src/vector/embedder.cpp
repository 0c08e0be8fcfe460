#include "repofix/vector/embedder.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "repofix/util/strings.hpp"

namespace repofix::vector {

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("embedder dimension must be positive");
}

std::string HashEmbedder::id() const { return "hash-bow-" + std::to_string(dim_); }

std::size_t HashEmbedder::bucket_of(const std::string& token, std::size_t dim) {
    // FNV-1a 64-bit
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : token) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h % dim);
}

bool HashEmbedder::is_stop_word(const std::string& token) {
    static const std::set<std::string> kStopWords = {
        "a", "an", "the", "is", "are", "of", "to", "and", "or", "in", "on", "with", "for"};
    return kStopWords.count(token) > 0;
}

EmbeddingVector HashEmbedder::embed(const std::string& text) {
    if (util::trim(text).empty())
        throw std::invalid_argument("cannot embed empty text");
    EmbeddingVector v(dim_, 0.0);
    double norm_sq = 0.0;
    for (const auto& token : util::tokenize_words(text)) {
        if (is_stop_word(token)) continue;
        v[bucket_of(token, dim_)] += 1.0;
    }
    for (double x : v) norm_sq += x * x;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
    }
    return v;
}

}  // namespace repofix::vector
