#pragma once
// Exact brute-force cosine index over embedding documents. Build-then-freeze
// lifecycle: entries are inserted once, then the index serves reads only.

#include <filesystem>
#include <string>
#include <vector>

#include "repofix/indexer/embedding_doc.hpp"
#include "repofix/vector/embedder.hpp"

namespace repofix::vector {

struct IndexEntry {
    std::uint64_t id = 0;
    EmbeddingVector vector;
    indexer::EmbeddingDocument doc;
};

struct RetrievalResult {
    const IndexEntry* entry = nullptr;
    double score = 0.0;  // cosine similarity in [-1, 1]
};

class VectorIndex {
public:
    explicit VectorIndex(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<IndexEntry>& entries() const { return entries_; }

    // Ids are assigned in insertion order. Throws on dimension mismatch.
    std::uint64_t add(EmbeddingVector vector, indexer::EmbeddingDocument doc);

    // Exact cosine ranking: min(k, size) results sorted by score descending,
    // ties broken by ascending id. A zero-norm query or entry scores 0.
    std::vector<RetrievalResult> search(const EmbeddingVector& query, std::size_t k) const;

    // Versioned binary artifact; load(save(x)) reproduces ids, vectors and
    // documents exactly.
    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

private:
    std::size_t dim_;
    std::vector<IndexEntry> entries_;
};

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace repofix::vector
