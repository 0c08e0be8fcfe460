#pragma once
// Run configuration: every stage knob with a default, overridable by a JSON
// config file and then by CLI flags.

#include <nlohmann/json.hpp>

#include <string>

#include "repofix/engine/engine.hpp"
#include "repofix/indexer/repo_scan.hpp"
#include "repofix/llm/backend.hpp"
#include "repofix/localize/localizer.hpp"
#include "repofix/validate/runner.hpp"
#include "repofix/vector/http_embedder.hpp"

namespace repofix::orchestrate {

enum class BackendMode { Live, Replay, Record };

std::optional<BackendMode> backend_mode_from_string(std::string_view s);
const char* to_string(BackendMode mode);

struct RunConfig {
    std::string repo_root;
    std::string issue_file;  // "-" reads stdin
    std::string index_dir;
    std::string run_dir;

    localize::LocalizerConfig localizer;
    engine::EngineConfig engine;
    indexer::IndexConfig index;

    BackendMode backend_mode = BackendMode::Live;
    std::string transcript_path;
    llm::LiveBackendConfig live;

    std::string embedder_kind = "hash";  // "hash" or "http"
    std::size_t embedder_dim = 64;
    vector::HttpEmbedderConfig http_embedder;

    validate::TestRunnerConfig runner;

    bool reindex = false;
    bool verbose = false;
};

// Merges `j` over `config`; unknown keys are a ConfigError.
void apply_config_json(RunConfig& config, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

}  // namespace repofix::orchestrate
