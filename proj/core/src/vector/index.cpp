#include "repofix/vector/index.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "repofix/util/errors.hpp"

namespace repofix::vector {

namespace {

constexpr char kMagic[4] = {'R', 'F', 'V', 'I'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
void read_pod(std::ifstream& in, T& value, const char* what) {
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw Error(std::string("corrupt index artifact: truncated ") + what);
}

}  // namespace

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::uint64_t VectorIndex::add(EmbeddingVector vector, indexer::EmbeddingDocument doc) {
    if (vector.size() != dim_)
        throw Error("vector dimension " + std::to_string(vector.size()) +
                    " does not match index dimension " + std::to_string(dim_));
    for (double x : vector) {
        if (!std::isfinite(x)) throw Error("vector entries must be finite");
    }
    IndexEntry entry;
    entry.id = static_cast<std::uint64_t>(entries_.size());
    entry.vector = std::move(vector);
    entry.doc = std::move(doc);
    entries_.push_back(std::move(entry));
    return entries_.back().id;
}

std::vector<RetrievalResult> VectorIndex::search(const EmbeddingVector& query,
                                                 std::size_t k) const {
    if (entries_.empty()) throw Error("search against an empty index");
    if (query.size() != dim_)
        throw Error("query dimension " + std::to_string(query.size()) +
                    " does not match index dimension " + std::to_string(dim_));
    std::vector<RetrievalResult> results;
    results.reserve(entries_.size());
    for (const auto& entry : entries_)
        results.push_back({&entry, cosine_similarity(query, entry.vector)});
    std::sort(results.begin(), results.end(), [](const RetrievalResult& a, const RetrievalResult& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.entry->id < b.entry->id;
    });
    if (results.size() > k) results.resize(k);
    return results;
}

void VectorIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open index artifact for writing: " + path.string());
    out.write(kMagic, sizeof kMagic);
    write_pod(out, kFormatVersion);
    write_pod(out, static_cast<std::uint32_t>(dim_));
    write_pod(out, static_cast<std::uint64_t>(entries_.size()));
    for (const auto& entry : entries_) {
        write_pod(out, entry.id);
        out.write(reinterpret_cast<const char*>(entry.vector.data()),
                  static_cast<std::streamsize>(entry.vector.size() * sizeof(double)));
        nlohmann::json j = entry.doc;
        const std::string doc = j.dump();
        write_pod(out, static_cast<std::uint32_t>(doc.size()));
        out.write(doc.data(), static_cast<std::streamsize>(doc.size()));
    }
    if (!out) throw Error("write failed for index artifact: " + path.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index artifact: " + path.string());
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw Error("corrupt index artifact: bad magic header in " + path.string());
    std::uint32_t version = 0, dim = 0;
    std::uint64_t count = 0;
    read_pod(in, version, "version");
    if (version != kFormatVersion)
        throw Error("unsupported index format version " + std::to_string(version));
    read_pod(in, dim, "dimension");
    read_pod(in, count, "entry count");

    VectorIndex index(dim);
    index.entries_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        IndexEntry entry;
        read_pod(in, entry.id, "entry id");
        entry.vector.resize(dim);
        in.read(reinterpret_cast<char*>(entry.vector.data()),
                static_cast<std::streamsize>(dim * sizeof(double)));
        if (!in) throw Error("corrupt index artifact: truncated vector data");
        std::uint32_t doc_len = 0;
        read_pod(in, doc_len, "document length");
        std::string doc(doc_len, '\0');
        in.read(doc.data(), doc_len);
        if (!in) throw Error("corrupt index artifact: truncated document");
        nlohmann::json j = nlohmann::json::parse(doc, nullptr, false);
        if (j.is_discarded()) throw Error("corrupt index artifact: bad document JSON");
        entry.doc = j.get<indexer::EmbeddingDocument>();
        index.entries_.push_back(std::move(entry));
    }
    return index;
}

}  // namespace repofix::vector
