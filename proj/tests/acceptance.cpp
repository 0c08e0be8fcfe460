// Acceptance suite: one test case per criterion, one [PASS]/[FAIL] line each.

#include "doctest.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "repofix/edit/span.hpp"
#include "repofix/edit/splice.hpp"
#include "repofix/engine/engine.hpp"
#include "repofix/indexer/embedding_doc.hpp"
#include "repofix/indexer/python_parser.hpp"
#include "repofix/localize/localizer.hpp"
#include "repofix/orchestrate/eval.hpp"
#include "repofix/orchestrate/pipeline.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/sha256.hpp"
#include "repofix/util/strings.hpp"
#include "repofix/vector/index.hpp"
#include "test_util.hpp"

using namespace repofix;

namespace {

struct CriterionReporter : doctest::IReporter {
    const doctest::TestCaseData* current = nullptr;
    explicit CriterionReporter(const doctest::ContextOptions&) {}
    void report_query(const doctest::QueryData&) override {}
    void test_run_start() override {}
    void test_run_end(const doctest::TestRunStats&) override {}
    void test_case_start(const doctest::TestCaseData& in) override { current = &in; }
    void test_case_reenter(const doctest::TestCaseData&) override {}
    void test_case_end(const doctest::CurrentTestCaseStats& stats) override {
        std::printf("[%s] %s\n",
                    stats.failure_flags == doctest::TestCaseFailureReason::None ? "PASS" : "FAIL",
                    current->m_name);
        std::fflush(stdout);
    }
    void test_case_exception(const doctest::TestCaseException&) override {}
    void subcase_start(const doctest::SubcaseSignature&) override {}
    void subcase_end() override {}
    void log_assert(const doctest::AssertData&) override {}
    void log_message(const doctest::MessageData&) override {}
    void test_case_skipped(const doctest::TestCaseData&) override {}
};

REGISTER_LISTENER("criteria", 1, CriterionReporter);

std::vector<std::pair<std::string, indexer::FileSchematic>> parse_corpus() {
    std::vector<std::pair<std::string, indexer::FileSchematic>> out;
    const auto corpus = testutil::fixture("corpus");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus))
        if (entry.path().extension() == ".py") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        const std::string source = util::read_file(path);
        out.emplace_back(source, indexer::parse_file(path.filename().string(), source));
    }
    return out;
}

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

const char* kStillBroken =
    "def mean(xs):\n"
    "    \"\"\"Arithmetic mean of a non-empty sequence.\"\"\"\n"
    "    if len(xs) > 2:\n"
    "        return total(xs) / len(xs)\n"
    "    return 0.0\n";

struct EngineScenario {
    testutil::TempDir tmp{"acceptance_engine"};
    localize::ProblemStatement problem;
    localize::EditPlan plan;
    validate::TestRunnerConfig runner;
    validate::TestReport baseline;
    std::string pristine;
    std::string segment;

    EngineScenario() {
        pristine = (tmp / "pristine").string();
        util::copy_tree(testutil::fixture("bugrepo"), pristine);
        problem.text = util::read_file(std::filesystem::path(pristine) / "issue.txt");
        problem.repo_root = pristine;

        localize::PlanElement element;
        element.location.level = localize::LocationLevel::Method;
        element.location.name = "mean";
        element.location.start_line = 9;
        element.location.file = "stats.py";
        element.instruction = "return the true arithmetic mean instead of floor division";
        plan.elements.push_back(element);

        runner.command = {"python3", "run_tests.py"};
        runner.timeout_seconds = 120;
        baseline = validate::run_suite(pristine, runner);

        const std::string content =
            util::read_file(std::filesystem::path(pristine) / "stats.py");
        auto target = edit::resolve_span(content, element.location);
        REQUIRE(target.ok());
        segment = util::dedent(edit::extract_span(content, target->span_start, target->span_end));
    }

    std::string generation_prompt() const {
        return engine::build_code_generation_prompt(problem.text, plan.elements[0], segment);
    }

    engine::SolutionEngine::WorkspaceFactory factory() {
        return [this](int id) {
            const auto ws = tmp / ("candidate_" + std::to_string(id));
            std::filesystem::remove_all(ws);
            util::copy_tree(pristine, ws);
            return ws.string();
        };
    }
};

class StubLlmServer {
public:
    StubLlmServer() {
        server_.Post("/v1/chat/completions", [](const httplib::Request& req,
                                                httplib::Response& res) {
            auto body = nlohmann::json::parse(req.body);
            const std::string prompt = body["messages"][0]["content"];
            const double temperature = body.value("temperature", 0.0);
            auto has = [&](const char* m) { return prompt.find(m) != std::string::npos; };
            std::string content = "{}";
            if (has("natural-language search"))
                content = R"(["mean integer division truncated", "arithmetic average float"])";
            else if (has("Repository file map"))
                content = R"(["stats.py"])";
            else if (has("Candidate file schematics"))
                content = R"({"files": ["stats.py"], "rationale": "mean lives in stats.py"})";
            else if (has("identifying the exact locations"))
                content = R"([{"level": "method", "name": "mean", "start_line": 9,
                               "instruction": "return the true arithmetic mean"}])";
            else if (has("rewriting one"))
                content = nlohmann::json{{"code", temperature < 0.2 ? kOverfitFix : kGoodFix}}
                              .dump();
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
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

orchestrate::RunConfig fix_config(const std::filesystem::path& work, const std::string& repo) {
    orchestrate::RunConfig config;
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

std::string code_json(const std::string& code) {
    return nlohmann::json{{"code", code}}.dump();
}

}  // namespace

TEST_CASE("C1 indexer fidelity: reference-parse agreement and span round-trip under 5s") {
    const auto started = std::chrono::steady_clock::now();

    auto reference = nlohmann::json::parse(
        util::read_file(testutil::fixture("golden/reference_units.json")));
    auto corpus = parse_corpus();
    REQUIRE(corpus.size() >= 10);
    REQUIRE(corpus.size() == reference.size());

    std::size_t total_units = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& [source, schematic] = corpus[i];
        REQUIRE(schematic.parse_ok);

        std::multiset<std::string> got, want;
        for (const auto& unit : schematic.units) got.insert(unit.qualified_name);
        for (const auto& unit : reference[i].at("units"))
            want.insert(unit.at("qualified_name").get<std::string>());
        REQUIRE_MESSAGE(got == want, "name-set mismatch in ", schematic.path);
        total_units += schematic.units.size();

        // round trip: extracted span re-parses to the same unit
        bool nl = false;
        auto lines = util::split_lines(source, &nl);
        for (const auto& unit : schematic.units) {
            std::string span_text;
            for (int line = unit.start_line; line <= unit.end_line; ++line)
                span_text += lines[static_cast<std::size_t>(line - 1)] + "\n";
            auto reparsed = indexer::parse_file("span.py", util::dedent(span_text));
            REQUIRE_MESSAGE(reparsed.parse_ok, schematic.path, "::", unit.qualified_name);
            REQUIRE_FALSE(reparsed.units.empty());
            REQUIRE(reparsed.units.front().name == unit.name);
            REQUIRE(reparsed.units.front().arg_names() == unit.arg_names());
        }
    }
    REQUIRE(total_units >= 100);

    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - started);
    REQUIRE(elapsed.count() < 5.0);
}

TEST_CASE("C2 embedding-document conformance: 20 golden instantiations byte-for-byte") {
    auto goldens =
        nlohmann::json::parse(util::read_file(testutil::fixture("golden/golden_docs.json")));
    REQUIRE(goldens.size() == 20);

    std::map<std::string, std::vector<indexer::EmbeddingDocument>> by_file;
    for (const auto& [source, schematic] : parse_corpus())
        by_file[schematic.path] = indexer::build_embedding_documents(schematic);

    for (const auto& golden : goldens) {
        const std::string file = golden.at("file_name");
        const std::string qualified = golden.at("qualified_name");
        bool matched = false;
        for (const auto& doc : by_file[file]) {
            if (doc.unit_qualified_name == qualified &&
                doc.unit_start_line == golden.at("start_line").get<int>()) {
                REQUIRE_MESSAGE(doc.document == golden.at("document").get<std::string>(),
                                file, "::", qualified);
                matched = true;
            }
        }
        REQUIRE_MESSAGE(matched, "missing document for ", file, "::", qualified);
    }
}

TEST_CASE("C3 vector-search exactness: 200 random indices match the brute-force oracle") {
    std::mt19937 rng(1234567);
    std::uniform_int_distribution<int> dim_dist(2, 32);
    std::uniform_int_distribution<int> size_dist(1, 64);
    std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
    std::uniform_int_distribution<int> dup_dist(0, 4);

    for (int trial = 0; trial < 200; ++trial) {
        const int dim = dim_dist(rng);
        const int size = size_dist(rng);
        vector::VectorIndex index(static_cast<std::size_t>(dim));
        vector::EmbeddingVector first;
        for (int i = 0; i < size; ++i) {
            vector::EmbeddingVector v(static_cast<std::size_t>(dim));
            if (i > 0 && dup_dist(rng) == 0) {
                v = first;
            } else {
                for (auto& x : v) x = value_dist(rng);
            }
            if (i == 0) first = v;
            indexer::EmbeddingDocument doc;
            doc.file_name = "f" + std::to_string(i) + ".py";
            doc.unit_qualified_name = "u";
            doc.unit_start_line = 1;
            index.add(v, doc);
        }
        vector::EmbeddingVector query(static_cast<std::size_t>(dim));
        for (auto& x : query) x = value_dist(rng);

        // oracle: direct cosine with long-double accumulation, same tie-break
        std::vector<std::pair<double, std::uint64_t>> oracle;
        for (const auto& entry : index.entries()) {
            long double dot = 0, nq = 0, ne = 0;
            for (int d = 0; d < dim; ++d) {
                dot += static_cast<long double>(query[static_cast<std::size_t>(d)]) *
                       entry.vector[static_cast<std::size_t>(d)];
                nq += static_cast<long double>(query[static_cast<std::size_t>(d)]) *
                      query[static_cast<std::size_t>(d)];
                ne += static_cast<long double>(entry.vector[static_cast<std::size_t>(d)]) *
                      entry.vector[static_cast<std::size_t>(d)];
            }
            double score = (nq == 0 || ne == 0)
                               ? 0.0
                               : static_cast<double>(dot / (sqrtl(nq) * sqrtl(ne)));
            oracle.emplace_back(score, entry.id);
        }
        std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        auto got = index.search(query, static_cast<std::size_t>(size));
        REQUIRE(got.size() == oracle.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            REQUIRE_MESSAGE(got[i].entry->id == oracle[i].second, "trial ", trial, " rank ", i);
    }
}

TEST_CASE("C4 splice invariants: identity byte-equality and outside-span preservation") {
    auto corpus = parse_corpus();

    // identity replacement across every unit of the corpus
    for (const auto& [source, schematic] : corpus) {
        for (const auto& unit : schematic.units) {
            localize::RelevantLocation loc;
            loc.level = unit.kind == indexer::UnitKind::Class ? localize::LocationLevel::Class
                                                              : localize::LocationLevel::Method;
            loc.name = unit.qualified_name;
            loc.start_line = unit.start_line;
            loc.file = schematic.path;
            auto target = edit::resolve_span(source, loc);
            REQUIRE_MESSAGE(target.ok(), schematic.path, "::", unit.qualified_name, ": ",
                            target.error);
            const std::string original =
                edit::extract_span(source, target->span_start, target->span_end);
            auto result = edit::splice(source, *target, {util::dedent(original), 0.0, 1});
            REQUIRE_MESSAGE(result.ok(), schematic.path, "::", unit.qualified_name);
            REQUIRE_MESSAGE(result->new_content == source, "identity splice changed bytes in ",
                            schematic.path, "::", unit.qualified_name);
        }
    }

    // 500 randomized replacements: outside-span bytes preserved; syntax_ok
    // implies a clean re-parse
    std::mt19937 rng(987654);
    std::uniform_int_distribution<std::size_t> file_dist(0, corpus.size() - 1);
    std::uniform_int_distribution<int> shape_dist(0, 9);
    std::uniform_int_distribution<int> ident_dist(0, 25);

    int performed = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto& [source, schematic] = corpus[file_dist(rng)];
        if (schematic.units.empty()) continue;
        std::uniform_int_distribution<std::size_t> unit_dist(0, schematic.units.size() - 1);
        const auto& unit = schematic.units[unit_dist(rng)];

        localize::RelevantLocation loc;
        loc.level = unit.kind == indexer::UnitKind::Class ? localize::LocationLevel::Class
                                                          : localize::LocationLevel::Method;
        loc.name = unit.qualified_name;
        loc.start_line = unit.start_line;
        loc.file = schematic.path;
        auto target = edit::resolve_span(source, loc);
        REQUIRE(target.ok());

        const std::string name = std::string("gen_") + char('a' + ident_dist(rng)) +
                                 std::to_string(trial);
        std::string replacement;
        switch (shape_dist(rng)) {
            case 0: replacement = "def " + name + "():\n    return None\n"; break;
            case 1:
                replacement = "@wrapped\ndef " + name + "(a, b=2):\n    return a + b\n";
                break;
            case 2:
                replacement = "class " + name + ":\n    def m(self):\n        return 1\n";
                break;
            case 3:
                replacement = "def " + name + "(x):\n    if x:\n        return x\n    return 0\n";
                break;
            case 4: replacement = "def " + name + "(:\n    pass\n"; break;  // invalid
            case 5: replacement = "def " + name + "()\n    return 1\n"; break;  // invalid
            default:
                replacement = "def " + name + "(items):\n    total_value = 0\n"
                              "    for item in items:\n        total_value += item\n"
                              "    return total_value\n";
        }

        auto result = edit::splice(source, *target, {replacement, 0.0, 1});
        if (!result.ok()) {
            REQUIRE(result.error.find("does not parse") != std::string::npos);
            continue;
        }
        ++performed;
        bool nl = false;
        auto before = util::split_lines(source, &nl);
        auto after = util::split_lines(result->new_content, &nl);
        // prefix preserved
        for (int i = 1; i < target->span_start; ++i)
            REQUIRE(before[static_cast<std::size_t>(i - 1)] ==
                    after[static_cast<std::size_t>(i - 1)]);
        // suffix preserved
        const int suffix = static_cast<int>(before.size()) - target->span_end;
        for (int i = 0; i < suffix; ++i)
            REQUIRE(before[before.size() - 1 - static_cast<std::size_t>(i)] ==
                    after[after.size() - 1 - static_cast<std::size_t>(i)]);
        if (result->syntax_ok) {
            auto reparsed = indexer::parse_file(schematic.path, result->new_content);
            REQUIRE(reparsed.parse_ok);
        }
    }
    REQUIRE(performed >= 300);
}

TEST_CASE("C5 regression-diff algebra: 1000 random report pairs, zero violations") {
    std::mt19937 rng(5150);
    std::uniform_int_distribution<int> outcome_dist(0, 3);
    std::uniform_int_distribution<int> size_dist(0, 14);
    std::uniform_int_distribution<int> present_dist(0, 4);

    auto random_outcome = [&]() {
        switch (outcome_dist(rng)) {
            case 0: return validate::TestOutcome::Pass;
            case 1: return validate::TestOutcome::Fail;
            case 2: return validate::TestOutcome::Error;
            default: return validate::TestOutcome::Skip;
        }
    };

    for (int trial = 0; trial < 1000; ++trial) {
        validate::TestReport a, b;
        const int n = size_dist(rng);
        for (int i = 0; i < n; ++i) {
            const std::string id = "t" + std::to_string(i);
            a.outcomes[id] = random_outcome();
            if (present_dist(rng) != 0) b.outcomes[id] = random_outcome();
        }
        auto self = validate::diff_reports(a, a);
        REQUIRE(self.new_failures.empty());
        REQUIRE(self.new_passes.empty());
        REQUIRE(self.still_failing.empty());
        REQUIRE(self.vanished.empty());

        auto fwd = validate::diff_reports(a, b);
        for (const auto& id : fwd.new_failures) {
            REQUIRE(fwd.new_passes.count(id) == 0);
            REQUIRE(fwd.still_failing.count(id) == 0);
            REQUIRE(fwd.vanished.count(id) == 0);
            REQUIRE(a.outcomes.at(id) == validate::TestOutcome::Pass);
        }
        for (const auto& id : fwd.new_passes) {
            REQUIRE(fwd.still_failing.count(id) == 0);
            REQUIRE(fwd.vanished.count(id) == 0);
        }
        for (const auto& id : fwd.still_failing) REQUIRE(fwd.vanished.count(id) == 0);

        auto bwd = validate::diff_reports(b, a);
        for (const auto& id : fwd.new_failures)
            if (b.outcomes.count(id)) REQUIRE(bwd.new_passes.count(id) == 1);
        for (const auto& id : fwd.new_passes)
            if (b.outcomes.count(id)) REQUIRE(bwd.new_failures.count(id) == 1);
    }
}

TEST_CASE("C6 elimination soundness: regressing candidate out, clean candidate chosen") {
    EngineScenario s;
    testutil::TranscriptBuilder builder;
    builder.add(llm::Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kOverfitFix));
    builder.add(llm::Role::CodeGeneration, s.generation_prompt(), 0.4, code_json(kGoodFix));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    engine::EngineConfig config;
    config.schedule.temperatures = {0.0, 0.4};
    engine::SolutionEngine solution_engine(gateway, config, s.pristine);

    auto set = solution_engine.run(s.plan, s.problem, s.baseline, s.runner, s.factory());
    REQUIRE(set.candidates[0].status == engine::CandidateStatus::Regressed);
    REQUIRE(set.candidates[0].regression.new_failures ==
            std::set<std::string>{"stats::t_mean_pair"});
    REQUIRE(set.chosen.has_value());
    REQUIRE(*set.chosen == 1);

    // re-validate the chosen workspace: no pass->fail against baseline
    auto revalidated = validate::run_suite(set.candidates[1].workspace, s.runner);
    auto diff = validate::diff_reports(s.baseline, revalidated);
    REQUIRE(diff.new_failures.empty());
}

TEST_CASE("C7 feedback-loop bound: exactly one refinement per candidate, never two") {
    EngineScenario s;
    testutil::TranscriptBuilder builder;
    // both candidates regress at first
    builder.add(llm::Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kOverfitFix));
    builder.add(llm::Role::CodeGeneration, s.generation_prompt(), 0.4, code_json(kOverfitFix));
    // one refinement each: candidate 0 is fixed, candidate 1 stays broken
    const auto refine0 = engine::build_refinement_prompt(
        s.problem.text, s.plan.elements[0], "stats::t_mean_pair", "expected 3 got 0",
        kOverfitFix);
    builder.add(llm::Role::Refinement, refine0, 0.0, code_json(kGoodFix));
    builder.add(llm::Role::Refinement, refine0, 0.0, code_json(kStillBroken));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    auto backend = std::make_shared<llm::ReplayBackend>(transcript);
    llm::Gateway gateway(backend);
    engine::EngineConfig config;
    config.schedule.temperatures = {0.0, 0.4};
    engine::SolutionEngine solution_engine(gateway, config, s.pristine);

    auto set = solution_engine.run(s.plan, s.problem, s.baseline, s.runner, s.factory());
    REQUIRE(set.chosen.has_value());
    REQUIRE(*set.chosen == 0);
    REQUIRE(set.candidates[0].status == engine::CandidateStatus::Selected);
    REQUIRE(set.candidates[1].status == engine::CandidateStatus::Regressed);

    // transcript call counts prove the single-iteration cap: two refinement
    // completions total (one per candidate), transcript fully consumed
    REQUIRE(gateway.calls_for_role(llm::Role::Refinement) == 2);
    REQUIRE(backend->remaining() == 0);
    REQUIRE(set.candidates[0].refinement_attempted);
    REQUIRE(set.candidates[1].refinement_attempted);

    // a further refinement request is rejected without any completion call
    set.candidates[1].status = engine::CandidateStatus::Regressed;
    REQUIRE_FALSE(solution_engine.refine(set.candidates[1], s.baseline, s.problem, s.runner));
    REQUIRE(gateway.calls_for_role(llm::Role::Refinement) == 2);
}

TEST_CASE("C8 deterministic replay: byte-identical artifacts, zero network under poison") {
    testutil::TempDir tmp("c8");
    const auto pristine = tmp / "repo";
    util::copy_tree(testutil::fixture("bugrepo"), pristine);

    StubLlmServer stub;
    auto record_config = fix_config(tmp / "record", pristine.string());
    record_config.backend_mode = orchestrate::BackendMode::Record;
    record_config.live.base_url = stub.base_url();
    record_config.live.model = "stub-model";
    REQUIRE(orchestrate::run_fix(record_config) == 0);
    const auto record_run = std::filesystem::path(record_config.run_dir);

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
    auto replay_config = fix_config(tmp / "replay", pristine.string());
    replay_config.backend_mode = orchestrate::BackendMode::Replay;
    replay_config.transcript_path = (record_run / "transcript.jsonl").string();
    REQUIRE(orchestrate::run_fix(replay_config) == 0);
    llm::set_transport_factory_for_testing(nullptr);

    const auto replay_run = std::filesystem::path(replay_config.run_dir);
    REQUIRE(util::read_file(replay_run / "chosen.patch") ==
            util::read_file(record_run / "chosen.patch"));
    REQUIRE(util::read_file(replay_run / "report.json") ==
            util::read_file(record_run / "report.json"));
    REQUIRE(poison_uses.load() == 0);
}

TEST_CASE("C9 scaled-down eval: 5 scripted instances, top-5 exactly 80%, under 60s") {
    const auto started = std::chrono::steady_clock::now();
    testutil::TempDir tmp("c9");

    struct Spec {
        std::string id;
        bool rag_hits_gold;
        bool locator_names_gold;
    };
    const std::vector<Spec> specs = {
        {"inst_a", true, false},  {"inst_b", true, false}, {"inst_c", false, true},
        {"inst_d", false, true},  {"inst_e", false, false},
    };

    localize::LocalizerConfig lconf;
    lconf.n_queries = 1;
    lconf.per_query_k = 2;

    testutil::TranscriptBuilder transcript;
    std::string instances_jsonl;
    for (const auto& spec : specs) {
        const auto repo = tmp / spec.id;
        const std::string gold_token = "golden_" + spec.id;
        util::write_file(repo / "target.py",
                         "def " + gold_token + "():\n    \"\"\"the defective routine\"\"\"\n"
                         "    return 1\n");
        for (int i = 1; i <= 5; ++i)
            util::write_file(repo / ("f" + std::to_string(i) + ".py"),
                             "def filler_" + std::to_string(i) + "_" + spec.id +
                                 "():\n    return " + std::to_string(i) + "\n");

        const std::string problem = "issue in " + spec.id + ": routine misbehaves";
        localize::ProblemStatement ps;
        ps.text = problem;
        const std::string query = spec.rag_hits_gold
                                      ? gold_token + " defective routine"
                                      : "filler_1_" + spec.id + " filler_2_" + spec.id;
        transcript.add(llm::Role::QueryGeneration,
                       localize::build_query_generation_prompt(ps, 1), 0.0,
                       nlohmann::json::array({query}).dump());

        auto scan = indexer::scan_repository(repo.string());
        bool truncated = false;
        const auto rendered =
            indexer::render_repo_map_budgeted(scan.map, lconf.repo_map_char_budget, &truncated);
        nlohmann::json locator = spec.locator_names_gold
                                     ? nlohmann::json::array({"f3.py", "target.py"})
                                     : nlohmann::json::array({"f4.py"});
        transcript.add(llm::Role::FileLocator,
                       localize::build_file_locator_prompt(ps, rendered, lconf.m_map_files), 0.0,
                       locator.dump());

        nlohmann::json record = {{"instance_id", spec.id},
                                 {"repo", repo.string()},
                                 {"problem_statement", problem},
                                 {"gold_files", {"target.py"}}};
        instances_jsonl += record.dump() + "\n";
    }

    const auto transcript_path = transcript.write(tmp / "transcript.jsonl");
    util::write_file(tmp / "instances.jsonl", instances_jsonl);

    orchestrate::RunConfig config;
    config.run_dir = (tmp / "eval_run").string();
    config.backend_mode = orchestrate::BackendMode::Replay;
    config.transcript_path = transcript_path.string();
    config.localizer = lconf;

    auto instances = orchestrate::load_eval_instances((tmp / "instances.jsonl").string());
    auto report = orchestrate::run_eval(config, instances, false);

    REQUIRE(report.scored == 5);
    REQUIRE(report.errored == 0);
    REQUIRE(report.top5_pct == 80.0);

    // per-instance hits equal the brute-force intersection oracle
    for (const auto& result : report.instances) {
        auto oracle = [&](std::size_t k) {
            for (std::size_t i = 0; i < std::min(k, result.candidate_files.size()); ++i)
                if (result.candidate_files[i] == "target.py") return true;
            return false;
        };
        REQUIRE(result.top1_hit == oracle(1));
        REQUIRE(result.top5_hit == oracle(5));
    }

    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - started);
    REQUIRE(elapsed.count() < 60.0);
}

TEST_CASE("C10 pristine safety: checkout hashes unchanged across runs and injected failures") {
    testutil::TempDir tmp("c10");
    const auto pristine = tmp / "repo";
    util::copy_tree(testutil::fixture("bugrepo"), pristine);
    const auto hashes_before = util::hash_tree(pristine);

    // successful end-to-end run (record against the stub)
    StubLlmServer stub;
    auto ok_config = fix_config(tmp / "ok", pristine.string());
    ok_config.backend_mode = orchestrate::BackendMode::Record;
    ok_config.live.base_url = stub.base_url();
    REQUIRE(orchestrate::run_fix(ok_config) == 0);
    REQUIRE(util::hash_tree(pristine) == hashes_before);
    const auto full_transcript =
        std::filesystem::path(ok_config.run_dir) / "transcript.jsonl";

    // failure injection: baseline stage (runner cannot start)
    auto baseline_fail = fix_config(tmp / "inj_baseline", pristine.string());
    baseline_fail.backend_mode = orchestrate::BackendMode::Replay;
    baseline_fail.transcript_path = full_transcript.string();
    baseline_fail.runner.command = {"no-such-binary-zzz"};
    CHECK_THROWS(static_cast<void>(orchestrate::run_fix(baseline_fail)));
    REQUIRE(util::hash_tree(pristine) == hashes_before);

    // failure injection: localize stage (empty transcript, first call misses)
    auto localize_fail = fix_config(tmp / "inj_localize", pristine.string());
    localize_fail.backend_mode = orchestrate::BackendMode::Replay;
    util::write_file(tmp / "empty.jsonl", "");
    localize_fail.transcript_path = (tmp / "empty.jsonl").string();
    CHECK_THROWS_AS(static_cast<void>(orchestrate::run_fix(localize_fail)), ReplayMissError);
    REQUIRE(util::hash_tree(pristine) == hashes_before);

    // failure injection: generation stage (transcript stripped of
    // code_generation entries)
    std::string filtered;
    {
        std::istringstream in(util::read_file(full_transcript));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line);
            if (j.at("role") != "code_generation") filtered += line + "\n";
        }
    }
    util::write_file(tmp / "no_codegen.jsonl", filtered);
    auto generate_fail = fix_config(tmp / "inj_generate", pristine.string());
    generate_fail.backend_mode = orchestrate::BackendMode::Replay;
    generate_fail.transcript_path = (tmp / "no_codegen.jsonl").string();
    CHECK_THROWS(static_cast<void>(orchestrate::run_fix(generate_fail)));
    REQUIRE(util::hash_tree(pristine) == hashes_before);

    // report.json names the failing stage even on the failure paths
    auto report = nlohmann::json::parse(util::read_file(
        std::filesystem::path(generate_fail.run_dir) / "report.json"));
    REQUIRE(report["failure"]["stage"] == "solve");
}
