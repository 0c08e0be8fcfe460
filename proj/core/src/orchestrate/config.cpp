#include "repofix/orchestrate/config.hpp"

#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"

namespace repofix::orchestrate {

std::optional<BackendMode> backend_mode_from_string(std::string_view s) {
    if (s == "live") return BackendMode::Live;
    if (s == "replay") return BackendMode::Replay;
    if (s == "record") return BackendMode::Record;
    return std::nullopt;
}

const char* to_string(BackendMode mode) {
    switch (mode) {
        case BackendMode::Live: return "live";
        case BackendMode::Replay: return "replay";
        case BackendMode::Record: return "record";
    }
    return "live";
}

namespace {

void apply_localizer(localize::LocalizerConfig& c, const nlohmann::json& j) {
    c.n_queries = j.value("n_queries", c.n_queries);
    c.m_map_files = j.value("m_files", c.m_map_files);
    c.per_query_k = j.value("per_query_k", c.per_query_k);
    c.union_cap = j.value("union_cap", c.union_cap);
    c.l_max = j.value("l_max", c.l_max);
    c.retry_budget = j.value("retry_budget", c.retry_budget);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.repo_map_char_budget = j.value("map_char_budget", c.repo_map_char_budget);
}

void apply_engine(engine::EngineConfig& c, const nlohmann::json& j) {
    if (j.contains("temperatures"))
        c.schedule.temperatures = j["temperatures"].get<std::vector<double>>();
    c.retry_budget = j.value("retry_budget", c.retry_budget);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
}

void apply_runner(validate::TestRunnerConfig& c, const nlohmann::json& j) {
    if (j.contains("command")) c.command = j["command"].get<std::vector<std::string>>();
    if (j.contains("format")) {
        const std::string f = j["format"].get<std::string>();
        if (f == "line_protocol")
            c.report_format = validate::ReportFormat::LineProtocol;
        else if (f == "junit_xml")
            c.report_format = validate::ReportFormat::JunitXml;
        else
            throw ConfigError("unknown runner format: " + f);
    }
    c.timeout_seconds = j.value("timeout", c.timeout_seconds);
    c.report_file = j.value("report_file", c.report_file);
    if (j.contains("env")) c.env = j["env"].get<std::map<std::string, std::string>>();
}

void apply_llm(llm::LiveBackendConfig& c, const nlohmann::json& j) {
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.retry_backoff_ms = j.value("retry_backoff_ms", c.retry_backoff_ms);
    c.timeout_seconds = j.value("timeout", c.timeout_seconds);
}

void apply_embedder(RunConfig& config, const nlohmann::json& j) {
    config.embedder_kind = j.value("kind", config.embedder_kind);
    config.embedder_dim = j.value("dim", config.embedder_dim);
    config.http_embedder.base_url = j.value("base_url", config.http_embedder.base_url);
    config.http_embedder.model = j.value("model", config.http_embedder.model);
    config.http_embedder.dim = config.embedder_dim;
}

void apply_index(indexer::IndexConfig& c, const nlohmann::json& j) {
    if (j.contains("extensions")) {
        c.extensions.clear();
        for (const auto& e : j["extensions"]) c.extensions.insert(e.get<std::string>());
    }
    if (j.contains("excluded_dirs"))
        c.excluded_dirs = j["excluded_dirs"].get<std::vector<std::string>>();
    if (j.contains("exclude_globs"))
        c.exclude_globs = j["exclude_globs"].get<std::vector<std::string>>();
}

}  // namespace

void apply_config_json(RunConfig& config, const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "repo_root")
            config.repo_root = value.get<std::string>();
        else if (key == "issue_file")
            config.issue_file = value.get<std::string>();
        else if (key == "index_dir")
            config.index_dir = value.get<std::string>();
        else if (key == "run_dir")
            config.run_dir = value.get<std::string>();
        else if (key == "backend") {
            auto mode = backend_mode_from_string(value.get<std::string>());
            if (!mode) throw ConfigError("unknown backend mode: " + value.get<std::string>());
            config.backend_mode = *mode;
        } else if (key == "transcript")
            config.transcript_path = value.get<std::string>();
        else if (key == "localizer")
            apply_localizer(config.localizer, value);
        else if (key == "engine")
            apply_engine(config.engine, value);
        else if (key == "runner")
            apply_runner(config.runner, value);
        else if (key == "llm")
            apply_llm(config.live, value);
        else if (key == "embedder")
            apply_embedder(config, value);
        else if (key == "index")
            apply_index(config.index, value);
        else if (key == "verbose")
            config.verbose = value.get<bool>();
        else
            throw ConfigError("unknown config key: " + key);
    }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    nlohmann::json j = nlohmann::json::parse(util::read_file(path), nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
    apply_config_json(base, j);
    return base;
}

}  // namespace repofix::orchestrate
