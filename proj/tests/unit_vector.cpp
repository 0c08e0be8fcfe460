#include "doctest.h"

#include <cmath>
#include <random>

#include "repofix/util/errors.hpp"
#include "repofix/vector/embedder.hpp"
#include "repofix/vector/index.hpp"
#include "test_util.hpp"

using namespace repofix;
using vector::EmbeddingVector;
using vector::HashEmbedder;
using vector::VectorIndex;

namespace {

indexer::EmbeddingDocument doc_in(const std::string& file, const std::string& name) {
    indexer::EmbeddingDocument doc;
    doc.document = "Method " + name;
    doc.file_name = file;
    doc.unit_qualified_name = name;
    doc.unit_start_line = 1;
    return doc;
}

// independent brute-force oracle, long-double accumulation
std::vector<std::pair<double, std::uint64_t>> oracle_ranking(const VectorIndex& index,
                                                             const EmbeddingVector& query) {
    std::vector<std::pair<double, std::uint64_t>> scored;
    for (const auto& entry : index.entries()) {
        long double dot = 0, nq = 0, ne = 0;
        for (std::size_t i = 0; i < query.size(); ++i) {
            dot += static_cast<long double>(query[i]) * entry.vector[i];
            nq += static_cast<long double>(query[i]) * query[i];
            ne += static_cast<long double>(entry.vector[i]) * entry.vector[i];
        }
        double score = (nq == 0 || ne == 0)
                           ? 0.0
                           : static_cast<double>(dot / (std::sqrt(nq) * std::sqrt(ne)));
        scored.emplace_back(score, entry.id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    return scored;
}

}  // namespace

TEST_CASE("hash embedder is deterministic") {
    HashEmbedder embedder(64);
    CHECK(embedder.embed("alpha") == embedder.embed("alpha"));
}

TEST_CASE("hash embedder is order-insensitive (bag of words)") {
    HashEmbedder embedder(64);
    // hand-computed oracle: both orders fill the same buckets with the same
    // counts, so the normalized vectors are identical
    auto ab = embedder.embed("alpha beta");
    auto ba = embedder.embed("beta alpha");
    CHECK(ab == ba);

    const auto bucket_alpha = HashEmbedder::bucket_of("alpha", 64);
    const auto bucket_beta = HashEmbedder::bucket_of("beta", 64);
    REQUIRE(bucket_alpha != bucket_beta);
    CHECK(ab[bucket_alpha] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(ab[bucket_beta] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("hash embedder rejects empty text and zeroes stop-word-only text") {
    HashEmbedder embedder(64);
    CHECK_THROWS_AS(embedder.embed("   "), std::invalid_argument);
    auto zeros = embedder.embed("the of and");
    CHECK(std::all_of(zeros.begin(), zeros.end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("search: identity direction scores 1.0") {
    VectorIndex index(2);
    index.add({1.0, 0.0}, doc_in("f1.py", "a"));
    index.add({0.0, 1.0}, doc_in("f2.py", "b"));
    auto results = index.search({1.0, 0.0}, 1);
    REQUIRE(results.size() == 1);
    CHECK(results[0].entry->id == 0);
    CHECK(results[0].score == doctest::Approx(1.0));
}

TEST_CASE("search: equal scores tie-break by ascending id") {
    VectorIndex index(2);
    index.add({1.0, 0.0}, doc_in("f1.py", "a"));
    index.add({0.0, 1.0}, doc_in("f2.py", "b"));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto results = index.search({inv_sqrt2, inv_sqrt2}, 2);
    REQUIRE(results.size() == 2);
    CHECK(results[0].entry->id == 0);
    CHECK(results[1].entry->id == 1);
    CHECK(results[0].score == doctest::Approx(0.7071).epsilon(1e-3));
    CHECK(results[1].score == doctest::Approx(results[0].score));
}

TEST_CASE("search clamps k to the index size and validates inputs") {
    VectorIndex index(2);
    index.add({1.0, 0.0}, doc_in("f1.py", "a"));
    index.add({0.5, 0.5}, doc_in("f2.py", "b"));
    index.add({0.0, 1.0}, doc_in("f3.py", "c"));
    CHECK(index.search({1.0, 0.0}, 10).size() == 3);
    CHECK_THROWS(index.search({1.0, 0.0, 0.0}, 1));  // dim mismatch
    VectorIndex empty(2);
    CHECK_THROWS(empty.search({1.0, 0.0}, 1));
}

TEST_CASE("property: full-k search equals the brute-force oracle on 200 random indices") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> dim_dist(2, 32);
    std::uniform_int_distribution<int> size_dist(1, 64);
    std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
    std::uniform_int_distribution<int> dup_dist(0, 3);

    for (int trial = 0; trial < 200; ++trial) {
        const int dim = dim_dist(rng);
        const int size = size_dist(rng);
        VectorIndex index(static_cast<std::size_t>(dim));
        EmbeddingVector first;
        for (int i = 0; i < size; ++i) {
            EmbeddingVector v(static_cast<std::size_t>(dim));
            if (i > 0 && dup_dist(rng) == 0) {
                v = first;  // deliberate duplicates force tie-breaks
            } else {
                for (auto& x : v) x = value_dist(rng);
            }
            if (i == 0) first = v;
            index.add(v, doc_in("f" + std::to_string(i) + ".py", "u" + std::to_string(i)));
        }
        EmbeddingVector query(static_cast<std::size_t>(dim));
        for (auto& x : query) x = value_dist(rng);

        auto got = index.search(query, static_cast<std::size_t>(size));
        auto want = oracle_ranking(index, query);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            INFO("trial ", trial, " rank ", i);
            CHECK(got[i].entry->id == want[i].second);
            CHECK(got[i].score == doctest::Approx(want[i].first).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: ranking is invariant under positive query scaling") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
    std::uniform_real_distribution<double> scale_dist(0.001, 1000.0);
    VectorIndex index(8);
    for (int i = 0; i < 40; ++i) {
        EmbeddingVector v(8);
        for (auto& x : v) x = value_dist(rng);
        index.add(v, doc_in("f" + std::to_string(i) + ".py", "u"));
    }
    for (int trial = 0; trial < 25; ++trial) {
        EmbeddingVector query(8);
        for (auto& x : query) x = value_dist(rng);
        const double factor = scale_dist(rng);
        EmbeddingVector scaled = query;
        for (auto& x : scaled) x *= factor;
        auto a = index.search(query, index.size());
        auto b = index.search(scaled, index.size());
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].entry->id == b[i].entry->id);
    }
}

TEST_CASE("inserting a duplicate document does not reorder existing entries") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
    VectorIndex index(4);
    for (int i = 0; i < 10; ++i) {
        EmbeddingVector v(4);
        for (auto& x : v) x = value_dist(rng);
        index.add(v, doc_in("f" + std::to_string(i) + ".py", "u"));
    }
    EmbeddingVector query{0.3, -0.2, 0.9, 0.1};
    auto before = index.search(query, index.size());

    index.add(index.entries()[3].vector, doc_in("f3.py", "dup"));
    auto after = index.search(query, index.size());
    REQUIRE(after.size() == before.size() + 1);

    std::vector<std::uint64_t> before_ids, after_ids;
    for (const auto& r : before) before_ids.push_back(r.entry->id);
    for (const auto& r : after)
        if (r.entry->id != 10) after_ids.push_back(r.entry->id);
    CHECK(before_ids == after_ids);
}

TEST_CASE("persist/load round-trips entries and preserves search results") {
    testutil::TempDir tmp("vecidx");
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
    VectorIndex index(16);
    for (int i = 0; i < 100; ++i) {
        EmbeddingVector v(16);
        for (auto& x : v) x = value_dist(rng);
        index.add(v, doc_in("file" + std::to_string(i % 7) + ".py", "unit" + std::to_string(i)));
    }
    const auto path = tmp / "vectors.idx";
    index.save(path);
    auto loaded = VectorIndex::load(path);

    REQUIRE(loaded.size() == index.size());
    CHECK(loaded.dim() == index.dim());
    for (std::size_t i = 0; i < index.size(); ++i) {
        CHECK(loaded.entries()[i].id == index.entries()[i].id);
        CHECK(loaded.entries()[i].vector == index.entries()[i].vector);
        CHECK(loaded.entries()[i].doc == index.entries()[i].doc);
    }
    for (int q = 0; q < 5; ++q) {
        EmbeddingVector query(16);
        for (auto& x : query) x = value_dist(rng);
        auto a = index.search(query, 10);
        auto b = loaded.search(query, 10);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].entry->id == b[i].entry->id);
            CHECK(a[i].score == b[i].score);
        }
    }
}

TEST_CASE("loading a truncated artifact fails with a diagnostic") {
    testutil::TempDir tmp("vecidx_bad");
    VectorIndex index(4);
    index.add({1, 2, 3, 4}, doc_in("f.py", "u"));
    const auto path = tmp / "vectors.idx";
    index.save(path);

    auto bytes = util::read_file(path);
    util::write_file(path, bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_WITH_AS(static_cast<void>(VectorIndex::load(path)),
                         doctest::Contains("truncated"), Error);

    util::write_file(tmp / "junk.idx", "not an index at all");
    CHECK_THROWS_WITH_AS(static_cast<void>(VectorIndex::load(tmp / "junk.idx")),
                         doctest::Contains("magic"), Error);
}

TEST_CASE("index rejects dimension mismatches and non-finite values") {
    VectorIndex index(3);
    CHECK_THROWS(index.add({1.0, 2.0}, doc_in("f.py", "u")));
    CHECK_THROWS(index.add({1.0, 2.0, std::nan("")}, doc_in("f.py", "u")));
}
