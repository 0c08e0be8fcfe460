#include "repofix/orchestrate/eval.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include "repofix/edit/diff.hpp"
#include "repofix/orchestrate/pipeline.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"

namespace fs = std::filesystem;

namespace repofix::orchestrate {

std::vector<EvalInstance> load_eval_instances(const std::string& path) {
    std::vector<EvalInstance> instances;
    std::istringstream in(util::read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ConfigError("instances line " + std::to_string(line_no) + " is not JSON");
        EvalInstance instance;
        instance.instance_id = j.at("instance_id").get<std::string>();
        instance.repo_path = j.at("repo").get<std::string>();
        instance.problem_statement = j.at("problem_statement").get<std::string>();
        instance.gold_files = j.at("gold_files").get<std::vector<std::string>>();
        if (instance.gold_files.empty())
            throw ConfigError("instance " + instance.instance_id + " has no gold files");
        if (j.contains("gold_test_patch") && j["gold_test_patch"].is_string())
            instance.gold_test_patch = j["gold_test_patch"].get<std::string>();
        if (j.contains("fail_to_pass"))
            instance.fail_to_pass = j["fail_to_pass"].get<std::vector<std::string>>();
        // any hints field in the record is ignored by construction
        instances.push_back(std::move(instance));
    }
    return instances;
}

namespace {

bool hits_within(const std::vector<std::string>& candidates,
                 const std::vector<std::string>& gold, std::size_t k) {
    const std::size_t limit = std::min(k, candidates.size());
    for (std::size_t i = 0; i < limit; ++i)
        if (std::find(gold.begin(), gold.end(), candidates[i]) != gold.end()) return true;
    return false;
}

InstanceResult eval_one(const RunConfig& base_config, const EvalInstance& instance,
                        bool full_fix) {
    InstanceResult result;
    result.instance_id = instance.instance_id;

    const fs::path instance_dir = fs::path(base_config.run_dir) / "instances" /
                                  instance.instance_id;
    RunConfig config = base_config;
    config.repo_root = instance.repo_path;
    config.index_dir = (instance_dir / "index").string();
    config.run_dir = instance_dir.string();
    fs::create_directories(instance_dir);

    if (!fs::is_directory(instance.repo_path)) {
        result.error = "instance checkout missing: " + instance.repo_path;
        return result;
    }
    run_index(config);
    auto artifacts = load_index_artifacts(config.index_dir);
    auto index = load_vector_index(config.index_dir);
    auto embedder = make_embedder(config);

    localize::ProblemStatement problem;
    problem.text = instance.problem_statement;
    problem.repo_root = instance.repo_path;

    llm::Gateway gateway(make_backend(config), make_call_sink(config.run_dir));
    localize::Localizer localizer(gateway, config.localizer);

    // candidate-file scoring needs only stage 1 (queries + retrieval + map)
    auto queries = localizer.generate_queries(problem, config.localizer.n_queries);
    std::vector<localize::ScoredFile> rag;
    if (index.size() > 0)
        rag = localize::Localizer::retrieve_candidate_files(queries, index, *embedder,
                                                            config.localizer.per_query_k);
    std::vector<std::string> warnings;
    auto map_based =
        localizer.locate_files_from_map(problem, artifacts.map, config.localizer.m_map_files,
                                        warnings);
    auto candidates = localize::Localizer::union_candidates(
        rag, map_based, static_cast<std::size_t>(config.localizer.union_cap));

    result.candidate_files = candidates.paths();
    result.top1_hit = hits_within(result.candidate_files, instance.gold_files, 1);
    result.top5_hit = hits_within(result.candidate_files, instance.gold_files, 5);

    if (!full_fix) return result;

    // Full resolution check. The fix pipeline never sees the gold test
    // patch; it is applied to a fresh scratch after selection.
    int exit_code = run_fix(config);
    if (exit_code != 0) {
        result.resolved = false;
        return result;
    }
    const fs::path chosen_patch = fs::path(config.run_dir) / "chosen.patch";
    WorkspaceManager workspaces(instance_dir / "eval_workspaces");
    auto baseline = record_baseline(config, instance.repo_path, workspaces);

    const std::string ws = workspaces.create_scratch(instance.repo_path, "resolution");
    edit::apply_unified_diff(ws, util::read_file(chosen_patch));
    if (!instance.gold_test_patch.empty()) edit::apply_unified_diff(ws, instance.gold_test_patch);
    auto post = validate::run_suite(ws, config.runner);
    if (post.truncated) {
        result.error = "resolution run truncated: " + post.diagnostic;
        return result;
    }
    auto diff = validate::diff_reports(baseline, post);
    result.full_suite_clean = !validate::is_regression(diff, baseline);
    if (!instance.fail_to_pass.empty()) {
        bool all_pass = true;
        for (const auto& id : instance.fail_to_pass) {
            auto it = post.outcomes.find(id);
            if (it == post.outcomes.end() || it->second != validate::TestOutcome::Pass) {
                all_pass = false;
                break;
            }
        }
        result.resolved = all_pass && *result.full_suite_clean;
    }
    return result;
}

}  // namespace

EvalReport run_eval(const RunConfig& config, const std::vector<EvalInstance>& instances,
                    bool full_fix) {
    EvalReport report;
    int top1 = 0, top5 = 0, resolved = 0, with_verdict = 0;
    for (const auto& instance : instances) {
        InstanceResult result;
        try {
            result = eval_one(config, instance, full_fix);
        } catch (const std::exception& e) {
            result.instance_id = instance.instance_id;
            result.error = e.what();
        }
        if (result.error.empty()) {
            ++report.scored;
            if (result.top1_hit) ++top1;
            if (result.top5_hit) ++top5;
            if (result.resolved.has_value()) {
                ++with_verdict;
                if (*result.resolved) ++resolved;
            }
        } else {
            ++report.errored;
        }
        report.instances.push_back(std::move(result));
    }
    if (report.scored > 0) {
        report.top1_pct = 100.0 * top1 / report.scored;
        report.top5_pct = 100.0 * top5 / report.scored;
    }
    if (with_verdict > 0) report.resolution_pct = 100.0 * resolved / with_verdict;
    return report;
}

void to_json(nlohmann::json& j, const InstanceResult& r) {
    j = nlohmann::json{{"instance_id", r.instance_id},
                       {"top1_hit", r.top1_hit},
                       {"top5_hit", r.top5_hit},
                       {"candidate_files", r.candidate_files},
                       {"error", r.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.error)}};
    j["resolved"] = r.resolved ? nlohmann::json(*r.resolved) : nlohmann::json(nullptr);
    j["full_suite_clean"] =
        r.full_suite_clean ? nlohmann::json(*r.full_suite_clean) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const EvalReport& r) {
    j = nlohmann::json{{"instances", r.instances},
                       {"scored", r.scored},
                       {"errored", r.errored},
                       {"top1_pct", r.top1_pct},
                       {"top5_pct", r.top5_pct}};
    j["resolution_pct"] =
        r.resolution_pct ? nlohmann::json(*r.resolution_pct) : nlohmann::json(nullptr);
}

}  // namespace repofix::orchestrate
