#include "repofix/orchestrate/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "repofix/edit/diff.hpp"
#include "repofix/indexer/embedding_doc.hpp"
#include "repofix/indexer/python_parser.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/vector/http_embedder.hpp"

namespace fs = std::filesystem;

namespace repofix::orchestrate {

std::unique_ptr<vector::Embedder> make_embedder(const RunConfig& config) {
    if (config.embedder_kind == "hash")
        return std::make_unique<vector::HashEmbedder>(config.embedder_dim);
    if (config.embedder_kind == "http") {
        auto http = config.http_embedder;
        http.dim = config.embedder_dim;
        return std::make_unique<vector::HttpEmbedder>(http);
    }
    throw ConfigError("unknown embedder kind: " + config.embedder_kind);
}

std::shared_ptr<llm::Backend> make_backend(const RunConfig& config) {
    auto live_config = [&] {
        llm::LiveBackendConfig live = config.live;
        if (live.base_url.empty())
            if (const char* url = std::getenv("LLM_BASE_URL")) live.base_url = url;
        if (live.model.empty())
            if (const char* model = std::getenv("LLM_MODEL")) live.model = model;
        return live;
    };
    switch (config.backend_mode) {
        case BackendMode::Live:
            return std::make_shared<llm::LiveBackend>(live_config());
        case BackendMode::Replay: {
            if (config.transcript_path.empty())
                throw ConfigError("replay backend requires --transcript");
            return std::make_shared<llm::ReplayBackend>(config.transcript_path);
        }
        case BackendMode::Record: {
            std::string path = config.transcript_path;
            if (path.empty()) path = (fs::path(config.run_dir) / "transcript.jsonl").string();
            return std::make_shared<llm::RecordBackend>(
                std::make_unique<llm::LiveBackend>(live_config()), path);
        }
    }
    throw ConfigError("unhandled backend mode");
}

llm::CallSink make_call_sink(const fs::path& run_dir) {
    const fs::path path = run_dir / "calls.jsonl";
    return [path](const llm::CallRecord& record) {
        nlohmann::json j = {{"role", llm::to_string(record.role)},
                            {"temperature", record.temperature},
                            {"attempt", record.attempt},
                            {"prompt", record.prompt},
                            {"response", record.response_text},
                            {"prompt_tokens", record.usage.prompt_tokens},
                            {"completion_tokens", record.usage.completion_tokens}};
        std::ofstream out(path, std::ios::app);
        out << j.dump() << "\n";
    };
}

std::string read_issue_text(const std::string& issue_file) {
    std::string raw;
    if (issue_file == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        raw = buffer.str();
    } else {
        raw = util::read_file(issue_file);
    }
    // Structured instance records may carry hints; only the problem
    // statement ever reaches the pipeline.
    nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("problem_statement"))
        return j["problem_statement"].get<std::string>();
    return raw;
}

void run_index(const RunConfig& config) {
    if (config.repo_root.empty()) throw ConfigError("index requires --root");
    if (config.index_dir.empty()) throw ConfigError("index requires --out");

    auto scan = indexer::scan_repository(config.repo_root, config.index);
    for (const auto& warning : scan.warnings) std::cerr << "warning: " << warning << "\n";

    std::vector<indexer::FileSchematic> schematics;
    std::vector<indexer::EmbeddingDocument> docs;
    for (const auto& path : scan.map.all_paths()) {
        const std::string source = util::read_file(fs::path(config.repo_root) / path);
        auto schematic = indexer::parse_file(path, source);
        for (auto& doc : indexer::build_embedding_documents(schematic)) docs.push_back(std::move(doc));
        schematics.push_back(std::move(schematic));
    }

    auto embedder = make_embedder(config);
    vector::VectorIndex index(embedder->dim());
    for (const auto& doc : docs) index.add(embedder->embed(doc.document), doc);

    const fs::path out(config.index_dir);
    fs::create_directories(out);
    util::write_file(out / "repo_map.json", indexer::render_repo_map(scan.map) + "\n");
    util::write_file(out / "schematics.json", nlohmann::json(schematics).dump(2) + "\n");
    {
        std::string lines;
        for (const auto& doc : docs) lines += nlohmann::json(doc).dump() + "\n";
        util::write_file(out / "embedding_docs.jsonl", lines);
    }
    index.save(out / "vectors.idx");

    nlohmann::json meta = {{"root", fs::absolute(config.repo_root).string()},
                           {"extensions", config.index.extensions},
                           {"files", scan.map.file_count()},
                           {"documents", docs.size()},
                           {"embedder", embedder->id()},
                           {"dim", embedder->dim()}};
    util::write_file(out / "index_meta.json", meta.dump(2) + "\n");

    if (config.verbose)
        std::cerr << "indexed " << scan.map.file_count() << " files, " << docs.size()
                  << " embedding documents\n";
}

IndexArtifacts load_index_artifacts(const std::string& index_dir) {
    const fs::path dir(index_dir);
    IndexArtifacts artifacts;

    nlohmann::json meta =
        nlohmann::json::parse(util::read_file(dir / "index_meta.json"), nullptr, false);
    if (!meta.is_discarded()) artifacts.repo_root = meta.value("root", std::string{});

    nlohmann::json map_json =
        nlohmann::json::parse(util::read_file(dir / "repo_map.json"), nullptr, false);
    if (map_json.is_discarded()) throw ConfigError("repo_map.json is not valid JSON");
    for (const auto& [key, files] : map_json.items())
        artifacts.map.entries[key] = files.get<std::vector<std::string>>();

    nlohmann::json schematics_json =
        nlohmann::json::parse(util::read_file(dir / "schematics.json"), nullptr, false);
    if (schematics_json.is_discarded()) throw ConfigError("schematics.json is not valid JSON");
    for (const auto& entry : schematics_json) {
        auto schematic = entry.get<indexer::FileSchematic>();
        artifacts.schematics[schematic.path] = std::move(schematic);
    }

    const fs::path docs_path = dir / "embedding_docs.jsonl";
    if (fs::exists(docs_path)) {
        std::istringstream in(util::read_file(docs_path));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (!j.is_discarded()) artifacts.docs.push_back(j.get<indexer::EmbeddingDocument>());
        }
    }
    return artifacts;
}

vector::VectorIndex load_vector_index(const std::string& index_dir) {
    return vector::VectorIndex::load(fs::path(index_dir) / "vectors.idx");
}

validate::TestReport record_baseline(const RunConfig& config, const std::string& repo_root,
                                     WorkspaceManager& workspaces) {
    const std::string ws = workspaces.create_scratch(repo_root, "baseline");
    auto report = validate::run_suite(ws, config.runner);
    workspaces.destroy(ws);
    util::write_file(fs::path(config.run_dir) / "baseline.json",
                     nlohmann::json(report).dump(2) + "\n");
    if (report.truncated)
        throw PipelineError("baseline",
                            "baseline test run unusable, no sound elimination is possible: " +
                                report.diagnostic);
    return report;
}

namespace {

std::string resolve_repo_root(const RunConfig& config, const IndexArtifacts& artifacts) {
    if (!config.repo_root.empty()) return config.repo_root;
    if (!artifacts.repo_root.empty() && fs::is_directory(artifacts.repo_root))
        return artifacts.repo_root;
    throw ConfigError("repository root unknown: pass --root or reindex");
}

nlohmann::json localize_outcome_json(const localize::Localizer::Outcome& outcome) {
    return nlohmann::json{{"queries", outcome.queries.queries},
                          {"candidates", outcome.candidates},
                          {"selection", outcome.selection},
                          {"plan", outcome.plan},
                          {"warnings", outcome.warnings},
                          {"map_truncated", outcome.map_truncated}};
}

nlohmann::json candidate_json(const engine::CandidateSolution& candidate) {
    nlohmann::json edits = nlohmann::json::array();
    for (const auto& edit : candidate.edits)
        edits.push_back({{"location", edit.element.location},
                         {"attempts", edit.code.attempt},
                         {"changed_span", {edit.changed_start, edit.changed_end}}});
    return nlohmann::json{
        {"id", candidate.id},
        {"temperature", candidate.temperature},
        {"status", engine::to_string(candidate.status)},
        {"patch_file", "candidates/candidate_" + std::to_string(candidate.id) + ".patch"},
        {"diagnostic", candidate.diagnostic},
        {"regression", candidate.regression},
        {"refinement_attempted", candidate.refinement_attempted},
        {"edits", edits}};
}

}  // namespace

int run_localize(const RunConfig& config) {
    if (config.index_dir.empty()) throw ConfigError("localize requires --index");
    if (config.issue_file.empty()) throw ConfigError("localize requires --issue");
    fs::create_directories(config.run_dir);

    auto artifacts = load_index_artifacts(config.index_dir);
    auto index = load_vector_index(config.index_dir);
    auto embedder = make_embedder(config);

    localize::ProblemStatement problem;
    problem.text = read_issue_text(config.issue_file);
    problem.repo_root = resolve_repo_root(config, artifacts);

    llm::Gateway gateway(make_backend(config), make_call_sink(config.run_dir));
    localize::Localizer localizer(gateway, config.localizer);
    auto outcome = localizer.localize(problem, artifacts.map, artifacts.schematics, index,
                                      *embedder);

    util::write_file(fs::path(config.run_dir) / "plan.json",
                     localize_outcome_json(outcome).dump(2) + "\n");
    return 0;
}

int run_fix(const RunConfig& config) {
    if (config.index_dir.empty()) throw ConfigError("fix requires --index");
    if (config.issue_file.empty()) throw ConfigError("fix requires --issue");
    fs::create_directories(config.run_dir);

    nlohmann::json report;
    report["chosen"] = nullptr;
    report["candidates"] = nlohmann::json::array();
    report["failure"] = nullptr;
    std::string stage = "init";

    auto write_report = [&] {
        util::write_file(fs::path(config.run_dir) / "report.json", report.dump(2) + "\n");
    };

    try {
        stage = "index";
        if (config.reindex || !fs::exists(fs::path(config.index_dir) / "vectors.idx")) {
            RunConfig index_config = config;
            if (index_config.repo_root.empty())
                throw ConfigError("cannot (re)index without --root");
            run_index(index_config);
        }
        auto artifacts = load_index_artifacts(config.index_dir);
        auto index = load_vector_index(config.index_dir);
        auto embedder = make_embedder(config);
        const std::string repo_root = resolve_repo_root(config, artifacts);

        localize::ProblemStatement problem;
        problem.text = read_issue_text(config.issue_file);
        problem.repo_root = repo_root;

        WorkspaceManager workspaces(fs::path(config.run_dir) / "workspaces");

        stage = "baseline";
        auto baseline = record_baseline(config, repo_root, workspaces);
        report["baseline"] = {
            {"pass", baseline.count(validate::TestOutcome::Pass)},
            {"fail", baseline.count(validate::TestOutcome::Fail)},
            {"error", baseline.count(validate::TestOutcome::Error)},
            {"skip", baseline.count(validate::TestOutcome::Skip)}};

        stage = "localize";
        llm::Gateway gateway(make_backend(config), make_call_sink(config.run_dir));
        localize::Localizer localizer(gateway, config.localizer);
        auto outcome =
            localizer.localize(problem, artifacts.map, artifacts.schematics, index, *embedder);
        util::write_file(fs::path(config.run_dir) / "plan.json",
                         localize_outcome_json(outcome).dump(2) + "\n");
        report["localization"] = {{"selected_files", outcome.selection.files},
                                  {"plan_elements", outcome.plan.elements.size()},
                                  {"warnings", outcome.warnings}};

        stage = "solve";
        engine::SolutionEngine solution_engine(gateway, config.engine, repo_root);
        auto solutions = solution_engine.run(
            outcome.plan, problem, baseline, config.runner, [&](int id) {
                return workspaces.create_scratch(repo_root, "candidate_" + std::to_string(id));
            });

        stage = "report";
        for (const auto& candidate : solutions.candidates) {
            util::write_file(fs::path(config.run_dir) / "candidates" /
                                 ("candidate_" + std::to_string(candidate.id) + ".patch"),
                             candidate.patch);
            util::write_file(fs::path(config.run_dir) /
                                 ("candidate_" + std::to_string(candidate.id) + "_post.json"),
                             nlohmann::json(candidate.post_report).dump(2) + "\n");
            report["candidates"].push_back(candidate_json(candidate));
        }
        auto usage = gateway.total_usage();
        report["tokens"] = {{"prompt", usage.prompt_tokens},
                            {"completion", usage.completion_tokens}};

        if (solutions.chosen) {
            report["chosen"] = *solutions.chosen;
            for (const auto& candidate : solutions.candidates) {
                if (candidate.id == *solutions.chosen)
                    util::write_file(fs::path(config.run_dir) / "chosen.patch", candidate.patch);
            }
            write_report();
            return 0;
        }
        stage = "select";
        write_report();
        throw NoViableSolutionError(
            "no candidate survived validation; per-candidate regression sets are in report.json");
    } catch (const std::exception& e) {
        if (report["failure"].is_null())
            report["failure"] = {{"stage", stage}, {"message", e.what()}};
        write_report();
        throw;
    }
}

}  // namespace repofix::orchestrate
