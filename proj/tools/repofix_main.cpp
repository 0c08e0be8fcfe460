// repofix: localize a defect from an issue description and produce a
// test-validated patch. Subcommands: index, localize, fix, eval.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

#include "repofix/orchestrate/eval.hpp"
#include "repofix/orchestrate/pipeline.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"

using namespace repofix;

namespace {

// 0 ok, 2 localization failure, 3 no surviving candidate, 4 backend error,
// 5 configuration error, 1 anything else.
int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 5;
    if (dynamic_cast<const BackendError*>(&e)) return 4;
    if (dynamic_cast<const NoViableSolutionError*>(&e)) return 3;
    if (dynamic_cast<const LocalizationError*>(&e)) return 2;
    return 1;
}

std::string default_run_dir() {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    return "run/" + std::to_string(seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical defect localization and test-validated patch generation"};
    app.require_subcommand(1);

    std::string config_file, backend_str, transcript, run_dir;
    bool verbose = false;
    app.add_option("--config", config_file, "JSON config file mirroring the run configuration");
    app.add_option("--backend", backend_str, "completion backend: live, replay or record");
    app.add_option("--transcript", transcript, "transcript path for replay/record backends");
    app.add_option("--run-dir", run_dir, "run output directory (default run/<timestamp>)");
    app.add_flag("--verbose", verbose, "verbose progress output");

    // index
    auto* index_cmd = app.add_subcommand("index", "scan and embed a repository");
    std::string index_root, index_out;
    std::vector<std::string> index_exts, index_excludes;
    index_cmd->add_option("--root", index_root, "repository root")->required();
    index_cmd->add_option("--out", index_out, "artifact output directory")->required();
    index_cmd->add_option("--ext", index_exts, "source extensions (default .py)");
    index_cmd->add_option("--exclude", index_excludes, "directory globs to exclude");

    // localize
    auto* localize_cmd =
        app.add_subcommand("localize", "produce candidate files, selection and an edit plan");
    std::string loc_index, loc_issue, loc_out, loc_root;
    int loc_top_k = -1, loc_l_max = -1;
    localize_cmd->add_option("--index", loc_index, "index artifact directory")->required();
    localize_cmd->add_option("--issue", loc_issue, "issue file, or - for stdin")->required();
    localize_cmd->add_option("--root", loc_root, "repository root (defaults to the indexed root)");
    localize_cmd->add_option("--top-k", loc_top_k, "candidate set cap (default 5)");
    localize_cmd->add_option("--l-max", loc_l_max, "selection ceiling (default 2)");
    localize_cmd->add_option("--out", loc_out, "plan output path (default <run-dir>/plan.json)");

    // fix
    auto* fix_cmd = app.add_subcommand("fix", "run the full localize-generate-validate pipeline");
    std::string fix_index, fix_issue, fix_out, fix_root, fix_temps;
    int fix_k = -1, fix_retry = -1;
    bool fix_reindex = false;
    fix_cmd->add_option("--index", fix_index, "index artifact directory")->required();
    fix_cmd->add_option("--issue", fix_issue, "issue file, or - for stdin")->required();
    fix_cmd->add_option("--root", fix_root, "repository root (defaults to the indexed root)");
    fix_cmd->add_option("--k", fix_k, "number of candidate solutions (default 3)");
    fix_cmd->add_option("--temps", fix_temps, "comma-separated temperature schedule");
    fix_cmd->add_option("--retry", fix_retry, "parse-error retry budget (default 2)");
    fix_cmd->add_option("--out", fix_out, "output directory (defaults to --run-dir)");
    fix_cmd->add_flag("--reindex", fix_reindex, "rebuild the index before fixing");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score localization over eval instances");
    std::string eval_instances, eval_out;
    bool eval_full_fix = false;
    eval_cmd->add_option("--instances", eval_instances, "JSONL instance file")->required();
    eval_cmd->add_option("--out", eval_out, "output directory (defaults to --run-dir)");
    eval_cmd->add_flag("--full-fix", eval_full_fix,
                       "run the full fix pipeline and score resolution");

    CLI11_PARSE(app, argc, argv);

    try {
        orchestrate::RunConfig config;
        if (!config_file.empty()) config = orchestrate::load_config_file(config_file, config);
        if (!backend_str.empty()) {
            auto mode = orchestrate::backend_mode_from_string(backend_str);
            if (!mode) throw ConfigError("unknown backend mode: " + backend_str);
            config.backend_mode = *mode;
        }
        if (!transcript.empty()) config.transcript_path = transcript;
        config.run_dir = !run_dir.empty() ? run_dir
                         : config.run_dir.empty() ? default_run_dir()
                                                  : config.run_dir;
        config.verbose = config.verbose || verbose;

        if (*index_cmd) {
            config.repo_root = index_root;
            config.index_dir = index_out;
            if (!index_exts.empty())
                config.index.extensions = {index_exts.begin(), index_exts.end()};
            for (const auto& glob : index_excludes) config.index.exclude_globs.push_back(glob);
            orchestrate::run_index(config);
            return 0;
        }
        if (*localize_cmd) {
            config.index_dir = loc_index;
            config.issue_file = loc_issue;
            if (!loc_root.empty()) config.repo_root = loc_root;
            if (loc_top_k > 0) config.localizer.union_cap = loc_top_k;
            if (loc_l_max > 0) config.localizer.l_max = loc_l_max;
            int rc = orchestrate::run_localize(config);
            if (!loc_out.empty())
                std::filesystem::copy_file(std::filesystem::path(config.run_dir) / "plan.json",
                                           loc_out,
                                           std::filesystem::copy_options::overwrite_existing);
            return rc;
        }
        if (*fix_cmd) {
            config.index_dir = fix_index;
            config.issue_file = fix_issue;
            if (!fix_root.empty()) config.repo_root = fix_root;
            if (!fix_out.empty()) config.run_dir = fix_out;
            config.reindex = fix_reindex;
            if (fix_retry >= 0) config.engine.retry_budget = fix_retry;
            if (!fix_temps.empty()) {
                config.engine.schedule.temperatures.clear();
                std::istringstream in(fix_temps);
                std::string item;
                while (std::getline(in, item, ','))
                    config.engine.schedule.temperatures.push_back(std::stod(item));
            }
            if (fix_k > 0) {
                auto& temps = config.engine.schedule.temperatures;
                while (static_cast<int>(temps.size()) > fix_k) temps.pop_back();
                // widen with evenly spread values when k exceeds the schedule
                while (static_cast<int>(temps.size()) < fix_k)
                    temps.push_back(temps.empty() ? 0.0 : temps.back() + 0.4);
            }
            return orchestrate::run_fix(config);
        }
        if (*eval_cmd) {
            if (!eval_out.empty()) config.run_dir = eval_out;
            auto instances = orchestrate::load_eval_instances(eval_instances);
            auto report = orchestrate::run_eval(config, instances, eval_full_fix);
            std::filesystem::create_directories(config.run_dir);
            util::write_file(std::filesystem::path(config.run_dir) / "eval_report.json",
                             nlohmann::json(report).dump(2) + "\n");
            std::cout << "scored " << report.scored << " instance(s), " << report.errored
                      << " errored; top-1 " << report.top1_pct << "%, top-5 " << report.top5_pct
                      << "%";
            if (report.resolution_pct) std::cout << ", resolved " << *report.resolution_pct << "%";
            std::cout << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
