#pragma once
// Shared test helpers: fixture paths, scratch directories, transcript
// scripting against the exact prompts the pipeline renders.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "repofix/llm/backend.hpp"
#include "repofix/util/fs.hpp"

namespace testutil {

inline std::filesystem::path tests_dir() { return std::filesystem::path(REPOFIX_TESTS_DIR); }
inline std::filesystem::path fixture(const std::string& rel) {
    return tests_dir() / "fixtures" / rel;
}

// Self-cleaning scratch directory under the build tree.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::path(REPOFIX_BUILD_DIR) / "test_tmp" /
                (tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

// Accumulates scripted (prompt -> response) pairs into a transcript file
// consumable by the replay backend.
class TranscriptBuilder {
public:
    TranscriptBuilder& add(repofix::llm::Role role, const std::string& prompt, double temperature,
                           const std::string& response_text) {
        repofix::llm::CompletionResponse response;
        response.text = response_text;
        response.usage.prompt_tokens = static_cast<std::int64_t>(prompt.size() / 4);
        response.usage.completion_tokens = static_cast<std::int64_t>(response_text.size() / 4);
        response.backend_id = "scripted";
        lines_ += repofix::llm::transcript_line(role, prompt, temperature, response) + "\n";
        return *this;
    }

    std::filesystem::path write(const std::filesystem::path& path) const {
        repofix::util::write_file(path, lines_);
        return path;
    }

private:
    std::string lines_;
};

}  // namespace testutil
