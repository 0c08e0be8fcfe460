#pragma once
// Localization-accuracy evaluation harness over hand-built (or imported)
// instances. Localization scoring is offline-friendly; the full fix path is
// optional. The gold test patch is applied only after final selection, and
// never by the fix pipeline itself.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "repofix/orchestrate/config.hpp"

namespace repofix::orchestrate {

struct EvalInstance {
    std::string instance_id;
    std::string repo_path;
    std::string problem_statement;
    std::vector<std::string> gold_files;
    std::string gold_test_patch;             // unified diff; empty when absent
    std::vector<std::string> fail_to_pass;   // designated tests for resolution
};

struct InstanceResult {
    std::string instance_id;
    bool top1_hit = false;
    bool top5_hit = false;
    std::optional<bool> resolved;          // designated-test verdict
    std::optional<bool> full_suite_clean;  // no pass->fail vs instance baseline
    std::vector<std::string> candidate_files;
    std::string error;  // non-empty when the instance errored out
};

struct EvalReport {
    std::vector<InstanceResult> instances;
    int scored = 0;
    int errored = 0;
    double top1_pct = 0.0;
    double top5_pct = 0.0;
    std::optional<double> resolution_pct;
};

// JSONL, one instance per line. Hint-bearing fields are discarded on load.
std::vector<EvalInstance> load_eval_instances(const std::string& path);

EvalReport run_eval(const RunConfig& config, const std::vector<EvalInstance>& instances,
                    bool full_fix);

void to_json(nlohmann::json& j, const InstanceResult& r);
void to_json(nlohmann::json& j, const EvalReport& r);

}  // namespace repofix::orchestrate
