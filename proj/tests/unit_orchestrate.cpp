#include "doctest.h"

#include <atomic>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "repofix/indexer/repo_scan.hpp"
#include "repofix/localize/localizer.hpp"
#include "repofix/orchestrate/eval.hpp"
#include "repofix/orchestrate/pipeline.hpp"
#include "repofix/orchestrate/workspace.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/sha256.hpp"
#include "test_util.hpp"

using namespace repofix;
using namespace repofix::orchestrate;

namespace {

const char* kGoodFix =
    "def mean(xs):\n"
    "    \"\"\"Arithmetic mean of a non-empty sequence.\"\"\"\n"
    "    return total(xs) / len(xs)\n";

const char* kOverfitFix =
    "def mean(xs):\n"
    "    \"\"\"Arithmetic mean of a non-empty sequence.\"\"\"\n"
    "    if len(xs) > 2:\n"
    "        return total(xs) / len(xs)\n"
    "    return 0\n";

// Role-aware chat-completions stub; responses keyed on prompt markers and
// request temperature, fully deterministic.
class StubLlmServer {
public:
    StubLlmServer() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            auto body = nlohmann::json::parse(req.body);
            const std::string prompt = body["messages"][0]["content"];
            const double temperature = body.value("temperature", 0.0);
            const std::string content = respond(prompt, temperature);
            nlohmann::json reply = {
                {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
                {"usage",
                 {{"prompt_tokens", static_cast<int>(prompt.size() / 4)},
                  {"completion_tokens", static_cast<int>(content.size() / 4)}}}};
            res.set_content(reply.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubLlmServer() {
        server_.stop();
        thread_.join();
    }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    static std::string respond(const std::string& prompt, double temperature) {
        auto has = [&](const char* marker) { return prompt.find(marker) != std::string::npos; };
        if (has("natural-language search"))
            return R"(["mean integer division truncated", "arithmetic average float"])";
        if (has("Repository file map")) return R"(["stats.py"])";
        if (has("Candidate file schematics"))
            return R"({"files": ["stats.py"], "rationale": "mean lives in stats.py"})";
        if (has("identifying the exact locations"))
            return R"([{"level": "method", "name": "mean", "start_line": 9,
                        "instruction": "return the true arithmetic mean"}])";
        if (has("rewriting one")) {
            nlohmann::json code = {{"code", temperature < 0.2 ? kOverfitFix : kGoodFix}};
            return code.dump();
        }
        return "{}";
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

RunConfig bugrepo_config(const std::filesystem::path& work, const std::string& repo) {
    RunConfig config;
    config.repo_root = repo;
    config.index_dir = (work / "index").string();
    config.run_dir = (work / "run").string();
    config.issue_file = (std::filesystem::path(repo) / "issue.txt").string();
    config.localizer.n_queries = 2;
    config.engine.schedule.temperatures = {0.0, 0.4};
    config.runner.command = {"python3", "run_tests.py"};
    config.runner.timeout_seconds = 120;
    config.live.retry_backoff_ms = 0;
    return config;
}

}  // namespace

TEST_CASE("run_index writes the artifact set and is byte-stable") {
    testutil::TempDir tmp("index");
    RunConfig config;
    config.repo_root = testutil::fixture("bugrepo").string();
    config.index_dir = (tmp / "index_a").string();
    run_index(config);

    for (const char* name : {"repo_map.json", "schematics.json", "embedding_docs.jsonl",
                             "vectors.idx", "index_meta.json"})
        CHECK(std::filesystem::exists(std::filesystem::path(config.index_dir) / name));

    auto artifacts = load_index_artifacts(config.index_dir);
    CHECK(artifacts.map.contains("stats.py"));
    CHECK(artifacts.schematics.count("stats.py") == 1);
    CHECK(artifacts.docs.size() >= 6);
    auto index = load_vector_index(config.index_dir);
    CHECK(index.size() == artifacts.docs.size());

    RunConfig config_b = config;
    config_b.index_dir = (tmp / "index_b").string();
    run_index(config_b);
    for (const char* name : {"repo_map.json", "schematics.json", "embedding_docs.jsonl"}) {
        CHECK(util::read_file(std::filesystem::path(config.index_dir) / name) ==
              util::read_file(std::filesystem::path(config_b.index_dir) / name));
    }
}

TEST_CASE("workspace manager: fidelity, isolation, idempotent destroy") {
    testutil::TempDir tmp("wsmgr");
    const auto pristine = tmp / "pristine";
    util::copy_tree(testutil::fixture("bugrepo"), pristine);

    WorkspaceManager manager(tmp / "workspaces");
    auto a = manager.create_scratch(pristine, "a");
    auto b = manager.create_scratch(pristine, "b");

    CHECK(util::hash_tree(a) == util::hash_tree(pristine));
    CHECK(util::hash_tree(b) == util::hash_tree(pristine));

    util::write_file(std::filesystem::path(a) / "stats.py", "changed = True\n");
    CHECK(util::hash_tree(b) == util::hash_tree(pristine));  // isolation

    manager.destroy(a);
    CHECK_FALSE(std::filesystem::exists(a));
    CHECK_NOTHROW(manager.destroy(a));  // idempotent
}

TEST_CASE("config file merges over defaults; unknown keys are fatal") {
    testutil::TempDir tmp("config");
    util::write_file(tmp / "config.json", R"({
        "localizer": {"n_queries": 7, "l_max": 1},
        "engine": {"temperatures": [0.1, 0.9], "retry_budget": 4},
        "runner": {"command": ["python3", "run_tests.py"], "timeout": 42.5},
        "embedder": {"kind": "hash", "dim": 32},
        "backend": "replay",
        "transcript": "t.jsonl"
    })");
    auto config = load_config_file((tmp / "config.json").string());
    CHECK(config.localizer.n_queries == 7);
    CHECK(config.localizer.l_max == 1);
    CHECK(config.engine.schedule.temperatures == std::vector<double>{0.1, 0.9});
    CHECK(config.engine.retry_budget == 4);
    CHECK(config.runner.timeout_seconds == 42.5);
    CHECK(config.embedder_dim == 32);
    CHECK(config.backend_mode == BackendMode::Replay);
    CHECK(config.transcript_path == "t.jsonl");
    // untouched defaults remain
    CHECK(config.localizer.per_query_k == 5);

    util::write_file(tmp / "bad.json", R"({"no_such_knob": 1})");
    CHECK_THROWS_AS(static_cast<void>(load_config_file((tmp / "bad.json").string())),
                    ConfigError);
}

TEST_CASE("issue ingestion uses problem_statement and drops hints") {
    testutil::TempDir tmp("issue");
    util::write_file(tmp / "issue.json",
                     R"({"problem_statement": "the bug", "hints": "look in secret.py"})");
    CHECK(read_issue_text((tmp / "issue.json").string()) == "the bug");

    util::write_file(tmp / "issue.txt", "plain text issue\n");
    CHECK(read_issue_text((tmp / "issue.txt").string()) == "plain text issue\n");
}

TEST_CASE("record -> replay closure: byte-identical artifacts, zero network") {
    testutil::TempDir tmp("closure");
    const auto pristine = tmp / "repo";
    util::copy_tree(testutil::fixture("bugrepo"), pristine);
    const auto pristine_hashes = util::hash_tree(pristine);

    // --- record against the stub server
    StubLlmServer stub;
    auto record_config = bugrepo_config(tmp / "record", pristine.string());
    record_config.backend_mode = BackendMode::Record;
    record_config.live.base_url = stub.base_url();
    record_config.live.model = "stub-model";
    REQUIRE(run_fix(record_config) == 0);

    const auto record_run = std::filesystem::path(record_config.run_dir);
    REQUIRE(std::filesystem::exists(record_run / "chosen.patch"));
    REQUIRE(std::filesystem::exists(record_run / "report.json"));
    REQUIRE(std::filesystem::exists(record_run / "transcript.jsonl"));
    const std::string chosen_recorded = util::read_file(record_run / "chosen.patch");
    CHECK(chosen_recorded.find("return total(xs) / len(xs)") != std::string::npos);

    auto report = nlohmann::json::parse(util::read_file(record_run / "report.json"));
    CHECK(report["chosen"] == 1);  // overfit candidate 0 eliminated, good fix chosen
    CHECK(report["candidates"][0]["status"] == "regressed");
    CHECK(report["candidates"][1]["status"] == "selected");

    // --- replay with a poisoned transport: no socket may open
    std::atomic<int> poison_uses{0};
    struct Poison : llm::HttpTransport {
        std::atomic<int>& uses;
        explicit Poison(std::atomic<int>& u) : uses(u) {}
        llm::HttpResult post(const std::string&, const std::map<std::string, std::string>&,
                             const std::string&, int) override {
            ++uses;
            return {};
        }
    };
    llm::set_transport_factory_for_testing(
        [&](const std::string&) { return std::make_shared<Poison>(poison_uses); });

    auto replay_config = bugrepo_config(tmp / "replay", pristine.string());
    replay_config.backend_mode = BackendMode::Replay;
    replay_config.transcript_path = (record_run / "transcript.jsonl").string();
    REQUIRE(run_fix(replay_config) == 0);
    llm::set_transport_factory_for_testing(nullptr);

    const auto replay_run = std::filesystem::path(replay_config.run_dir);
    CHECK(util::read_file(replay_run / "chosen.patch") == chosen_recorded);
    CHECK(util::read_file(replay_run / "report.json") ==
          util::read_file(record_run / "report.json"));
    CHECK(poison_uses.load() == 0);

    // --- pristine safety across both runs
    CHECK(util::hash_tree(pristine) == pristine_hashes);
}

TEST_CASE("replay miss mid-run exits nonzero and preserves partial artifacts") {
    testutil::TempDir tmp("miss");
    const auto pristine = tmp / "repo";
    util::copy_tree(testutil::fixture("bugrepo"), pristine);
    const auto pristine_hashes = util::hash_tree(pristine);

    auto config = bugrepo_config(tmp / "run", pristine.string());
    config.backend_mode = BackendMode::Replay;
    // empty transcript: the very first completion misses
    util::write_file(tmp / "empty.jsonl", "");
    config.transcript_path = (tmp / "empty.jsonl").string();

    CHECK_THROWS_AS(static_cast<void>(run_fix(config)), ReplayMissError);
    auto report =
        nlohmann::json::parse(util::read_file(std::filesystem::path(config.run_dir) / "report.json"));
    CHECK(report["failure"]["stage"] == "localize");
    CHECK(std::filesystem::exists(std::filesystem::path(config.run_dir) / "baseline.json"));
    CHECK(util::hash_tree(pristine) == pristine_hashes);
}

TEST_CASE("eval: five scripted instances score 80% top-5 deterministically") {
    testutil::TempDir tmp("eval");

    // five instance repos; gold file is target.py, fillers are f1..f5
    struct Spec {
        std::string id;
        bool rag_hits_gold;      // query token matches the gold method doc
        bool locator_names_gold;  // file locator lists the gold file
    };
    const std::vector<Spec> specs = {
        {"inst_rag_1", true, false},   // top-1 via retrieval
        {"inst_rag_2", true, false},   // top-1 via retrieval
        {"inst_map_1", false, true},   // top-5 via the file locator
        {"inst_map_2", false, true},   // top-5 via the file locator
        {"inst_miss", false, false},   // gold never surfaces
    };

    testutil::TranscriptBuilder transcript;
    std::string instances_jsonl;

    localize::LocalizerConfig lconf;
    lconf.n_queries = 1;
    lconf.per_query_k = 2;

    for (const auto& spec : specs) {
        const auto repo = tmp / spec.id;
        const std::string gold_token = "golden_" + spec.id;
        util::write_file(repo / "target.py",
                         "def " + gold_token + "():\n    \"\"\"the defective routine\"\"\"\n"
                         "    return 1\n");
        for (int i = 1; i <= 5; ++i) {
            util::write_file(repo / ("f" + std::to_string(i) + ".py"),
                             "def filler_" + std::to_string(i) + "_" + spec.id +
                                 "():\n    return " + std::to_string(i) + "\n");
        }

        const std::string problem = "issue in " + spec.id + ": routine misbehaves";
        const std::string query =
            spec.rag_hits_gold ? gold_token + " defective routine"
                               : "filler_1_" + spec.id + " filler_2_" + spec.id;
        localize::ProblemStatement ps;
        ps.text = problem;
        transcript.add(llm::Role::QueryGeneration,
                       localize::build_query_generation_prompt(ps, 1), 0.0,
                       nlohmann::json::array({query}).dump());

        auto scan = indexer::scan_repository(repo.string());
        bool truncated = false;
        const auto rendered =
            indexer::render_repo_map_budgeted(scan.map, lconf.repo_map_char_budget, &truncated);
        nlohmann::json locator_files = nlohmann::json::array();
        if (spec.locator_names_gold) {
            locator_files.push_back("f3.py");
            locator_files.push_back("target.py");
        } else {
            locator_files.push_back("f4.py");
        }
        transcript.add(llm::Role::FileLocator,
                       localize::build_file_locator_prompt(ps, rendered, lconf.m_map_files), 0.0,
                       locator_files.dump());

        nlohmann::json record = {{"instance_id", spec.id},
                                 {"repo", repo.string()},
                                 {"problem_statement", problem},
                                 {"gold_files", {"target.py"}},
                                 {"hints", "should be ignored"}};
        instances_jsonl += record.dump() + "\n";
    }

    const auto transcript_path = transcript.write(tmp / "eval_transcript.jsonl");
    const auto instances_path = tmp / "instances.jsonl";
    util::write_file(instances_path, instances_jsonl);

    RunConfig config;
    config.run_dir = (tmp / "eval_run").string();
    config.backend_mode = BackendMode::Replay;
    config.transcript_path = transcript_path.string();
    config.localizer = lconf;

    auto instances = load_eval_instances(instances_path.string());
    REQUIRE(instances.size() == 5);
    auto report = run_eval(config, instances, false);

    CHECK(report.scored == 5);
    CHECK(report.errored == 0);
    CHECK(report.top5_pct == 80.0);  // exact
    CHECK(report.top1_pct == 40.0);
    CHECK_FALSE(report.resolution_pct.has_value());

    // brute-force intersection oracle over the emitted candidate lists
    for (const auto& result : report.instances) {
        auto hit_within = [&](std::size_t k) {
            for (std::size_t i = 0; i < std::min(k, result.candidate_files.size()); ++i)
                if (result.candidate_files[i] == "target.py") return true;
            return false;
        };
        CHECK(result.top1_hit == hit_within(1));
        CHECK(result.top5_hit == hit_within(5));
    }

    // per-spec expectations
    CHECK(report.instances[0].top1_hit);
    CHECK(report.instances[2].top5_hit);
    CHECK_FALSE(report.instances[2].top1_hit);
    CHECK_FALSE(report.instances[4].top5_hit);
}

TEST_CASE("eval: zero instances produce an empty report without dividing by zero") {
    RunConfig config;
    testutil::TempDir tmp("eval_empty");
    config.run_dir = (tmp / "run").string();
    auto report = run_eval(config, {}, false);
    CHECK(report.scored == 0);
    CHECK(report.top1_pct == 0.0);
    CHECK(report.top5_pct == 0.0);
    CHECK_FALSE(report.resolution_pct.has_value());
}

TEST_CASE("eval instance loader validates gold files") {
    testutil::TempDir tmp("eval_load");
    util::write_file(tmp / "bad.jsonl",
                     R"({"instance_id": "x", "repo": "/r", "problem_statement": "p",
                         "gold_files": []})");
    CHECK_THROWS_AS(static_cast<void>(load_eval_instances((tmp / "bad.jsonl").string())),
                    ConfigError);
}
