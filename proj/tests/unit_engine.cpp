#include "doctest.h"

#include "repofix/edit/span.hpp"
#include "repofix/engine/engine.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/strings.hpp"
#include "test_util.hpp"

using namespace repofix;
using namespace repofix::engine;
using llm::Role;

namespace {

const char* kGoodFix =
    "def mean(xs):\n"
    "    \"\"\"Arithmetic mean of a non-empty sequence.\"\"\"\n"
    "    return total(xs) / len(xs)\n";

// passes the issue's own example but breaks stats::t_mean_pair
const char* kOverfitFix =
    "def mean(xs):\n"
    "    \"\"\"Arithmetic mean of a non-empty sequence.\"\"\"\n"
    "    if len(xs) > 2:\n"
    "        return total(xs) / len(xs)\n"
    "    return 0\n";

struct Scenario {
    testutil::TempDir tmp{"engine"};
    localize::ProblemStatement problem;
    localize::EditPlan plan;
    validate::TestRunnerConfig runner;
    validate::TestReport baseline;
    std::string pristine;
    std::string segment;  // dedented current code of the mean method

    Scenario() {
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
        runner.timeout_seconds = 60;
        baseline = validate::run_suite(pristine, runner);

        const std::string content =
            util::read_file(std::filesystem::path(pristine) / "stats.py");
        auto target = edit::resolve_span(content, element.location);
        REQUIRE(target.ok());
        segment = util::dedent(edit::extract_span(content, target->span_start, target->span_end));
    }

    std::string generation_prompt() const {
        return build_code_generation_prompt(problem.text, plan.elements[0], segment);
    }

    SolutionEngine::WorkspaceFactory factory() {
        return [this](int id) {
            const auto ws = tmp / ("candidate_" + std::to_string(id));
            std::filesystem::remove_all(ws);
            util::copy_tree(pristine, ws);
            return ws.string();
        };
    }
};

std::string code_json(const std::string& code) {
    return nlohmann::json{{"code", code}}.dump();
}

}  // namespace

TEST_CASE("temperature schedule validation") {
    TemperatureSchedule ok;
    ok.temperatures = {0.0, 0.4};
    CHECK_NOTHROW(ok.validate());
    TemperatureSchedule dup;
    dup.temperatures = {0.4, 0.4};
    CHECK_THROWS_AS(dup.validate(), ConfigError);
    TemperatureSchedule range;
    range.temperatures = {2.5};
    CHECK_THROWS_AS(range.validate(), ConfigError);
    TemperatureSchedule empty;
    empty.temperatures = {};
    CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("generate_candidates: k distinct candidates with distinct patches") {
    Scenario s;
    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kOverfitFix));
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.4, code_json(kGoodFix));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0, 0.4};
    SolutionEngine engine(gateway, config, s.pristine);

    auto candidates = engine.generate_candidates(s.plan, s.problem, s.factory());
    REQUIRE(candidates.size() == 2);
    CHECK(candidates[0].status == CandidateStatus::Generated);
    CHECK(candidates[1].status == CandidateStatus::Generated);
    CHECK(candidates[0].patch != candidates[1].patch);
    CHECK_FALSE(candidates[0].patch.empty());
    CHECK(candidates[0].edits.size() == 1);
    CHECK(candidates[0].edits[0].code.attempt == 1);

    // candidate isolation: workspaces differ and edits do not leak
    CHECK(candidates[0].workspace != candidates[1].workspace);
    CHECK(util::read_file(std::filesystem::path(candidates[0].workspace) / "stats.py") !=
          util::read_file(std::filesystem::path(candidates[1].workspace) / "stats.py"));
}

TEST_CASE("generation retry: unparseable code is retried with the diagnostic, attempt#=2") {
    Scenario s;
    const std::string bad_code = "def mean(xs:\n    return 0\n";

    // compute the exact validator diagnostic for the retry prompt
    const std::string content = util::read_file(std::filesystem::path(s.pristine) / "stats.py");
    auto target = edit::resolve_span(content, s.plan.elements[0].location);
    REQUIRE(target.ok());
    auto rejected = edit::splice(content, *target, {bad_code, 0.0, 1});
    REQUIRE_FALSE(rejected.ok());

    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(bad_code));
    builder.add(Role::CodeGeneration, s.generation_prompt() + llm::retry_section(rejected.error),
                0.0, code_json(kGoodFix));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0};
    config.retry_budget = 2;
    SolutionEngine engine(gateway, config, s.pristine);

    auto candidates = engine.generate_candidates(s.plan, s.problem, s.factory());
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].status == CandidateStatus::Generated);
    CHECK(candidates[0].edits[0].code.attempt == 2);
}

TEST_CASE("all candidates failing to generate is an engine failure") {
    Scenario s;
    const std::string bad_code = "def mean(xs:\n";
    const std::string content = util::read_file(std::filesystem::path(s.pristine) / "stats.py");
    auto target = edit::resolve_span(content, s.plan.elements[0].location);
    auto rejected = edit::splice(content, *target, {bad_code, 0.0, 1});

    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(bad_code));
    builder.add(Role::CodeGeneration, s.generation_prompt() + llm::retry_section(rejected.error),
                0.0, code_json(bad_code));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0};
    config.retry_budget = 1;
    SolutionEngine engine(gateway, config, s.pristine);
    CHECK_THROWS_AS(static_cast<void>(engine.generate_candidates(s.plan, s.problem, s.factory())),
                    NoViableSolutionError);
}

TEST_CASE("filter_by_validation eliminates pass->fail candidates, keeps clean ones") {
    Scenario s;
    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kOverfitFix));
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.4, code_json(kGoodFix));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0, 0.4};
    SolutionEngine engine(gateway, config, s.pristine);

    auto candidates = engine.generate_candidates(s.plan, s.problem, s.factory());
    engine.filter_by_validation(candidates, s.baseline, s.runner);

    CHECK(candidates[0].status == CandidateStatus::Regressed);
    CHECK(candidates[0].regression.new_failures == std::set<std::string>{"stats::t_mean_pair"});
    CHECK(candidates[1].status == CandidateStatus::Survived);
    CHECK(candidates[1].regression.new_failures.empty());
    CHECK(candidates[1].regression.new_passes == std::set<std::string>{"stats::t_mean"});

    // elimination soundness: re-validating the survivor's workspace is clean
    auto revalidated = validate::run_suite(candidates[1].workspace, s.runner);
    auto diff = validate::diff_reports(s.baseline, revalidated);
    CHECK(diff.new_failures.empty());
}

TEST_CASE("baseline-failing tests that stay failing do not eliminate a candidate") {
    Scenario s;
    // identity rewrite: keeps the bug, changes nothing test-visible
    const std::string identity =
        "def mean(xs):\n"
        "    \"\"\"Arithmetic mean of a non-empty sequence.\"\"\"\n"
        "    return total(xs) // len(xs)\n";
    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(identity));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0};
    SolutionEngine engine(gateway, config, s.pristine);
    auto candidates = engine.generate_candidates(s.plan, s.problem, s.factory());
    engine.filter_by_validation(candidates, s.baseline, s.runner);
    CHECK(candidates[0].status == CandidateStatus::Survived);
    CHECK(candidates[0].regression.still_failing == std::set<std::string>{"stats::t_mean"});
}

TEST_CASE("select_final: single survivor chosen without a completion call") {
    Scenario s;
    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kGoodFix));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0};
    SolutionEngine engine(gateway, config, s.pristine);
    auto set = engine.run(s.plan, s.problem, s.baseline, s.runner, s.factory());
    REQUIRE(set.chosen.has_value());
    CHECK(*set.chosen == 0);
    CHECK(set.candidates[0].status == CandidateStatus::Selected);
    CHECK(gateway.calls_for_role(Role::FinalSelection) == 0);
}

TEST_CASE("select_final among multiple survivors follows the model, validates the id") {
    Scenario s;
    std::vector<CandidateSolution> candidates(3);
    for (int i = 0; i < 3; ++i) {
        candidates[static_cast<std::size_t>(i)].id = i;
        candidates[static_cast<std::size_t>(i)].temperature = 0.4 * i;
        candidates[static_cast<std::size_t>(i)].status = CandidateStatus::Survived;
        candidates[static_cast<std::size_t>(i)].patch =
            "--- a/stats.py\n+++ b/stats.py\n@@ -1,1 +1,1 @@\n-x\n+y" + std::to_string(i) + "\n";
    }
    std::vector<const CandidateSolution*> view = {&candidates[0], &candidates[1], &candidates[2]};
    const auto prompt = build_final_selection_prompt(
        s.problem.text, render_candidates_for_selection(view, s.baseline));

    SUBCASE("valid choice is honored") {
        testutil::TranscriptBuilder builder;
        builder.add(Role::FinalSelection, prompt, 0.0, R"({"choice": 2})");
        auto transcript = builder.write(s.tmp / "sel.jsonl");
        llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
        EngineConfig config;
        SolutionEngine engine(gateway, config, s.pristine);
        auto chosen = engine.select_final(candidates, s.problem, s.baseline);
        REQUIRE(chosen.has_value());
        CHECK(*chosen == 2);
    }

    SUBCASE("invalid choice falls back to the lowest-temperature survivor") {
        testutil::TranscriptBuilder builder;
        builder.add(Role::FinalSelection, prompt, 0.0, R"({"choice": 99})");
        auto transcript = builder.write(s.tmp / "sel2.jsonl");
        llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
        EngineConfig config;
        SolutionEngine engine(gateway, config, s.pristine);
        auto chosen = engine.select_final(candidates, s.problem, s.baseline);
        REQUIRE(chosen.has_value());
        CHECK(*chosen == 0);
    }
}

TEST_CASE("refinement rescues a regressed candidate exactly once") {
    Scenario s;

    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kOverfitFix));

    // the refinement prompt sees the candidate's own broken code as segment
    localize::PlanElement element = s.plan.elements[0];
    const std::string failure_output = "expected 3 got 0";
    const auto refinement_prompt = build_refinement_prompt(
        s.problem.text, element, "stats::t_mean_pair", failure_output, kOverfitFix);
    builder.add(Role::Refinement, refinement_prompt, 0.0, code_json(kGoodFix));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0};
    SolutionEngine engine(gateway, config, s.pristine);

    auto set = engine.run(s.plan, s.problem, s.baseline, s.runner, s.factory());
    REQUIRE(set.chosen.has_value());
    CHECK(set.candidates[0].status == CandidateStatus::Selected);
    CHECK(set.candidates[0].refinement_attempted);
    CHECK(gateway.calls_for_role(Role::Refinement) == 1);
    CHECK(set.candidates[0].patch.find("return total(xs) / len(xs)") != std::string::npos);

    // a second refinement on the same candidate is rejected outright
    set.candidates[0].status = CandidateStatus::Regressed;
    CHECK_FALSE(engine.refine(set.candidates[0], s.baseline, s.problem, s.runner));
    CHECK(gateway.calls_for_role(Role::Refinement) == 1);
}

TEST_CASE("failed refinement eliminates the candidate; no survivors -> no chosen") {
    Scenario s;
    // still broken after refinement (same overfit shape, still fails t_mean_pair)
    const std::string still_broken =
        "def mean(xs):\n"
        "    \"\"\"Arithmetic mean of a non-empty sequence.\"\"\"\n"
        "    if len(xs) > 2:\n"
        "        return total(xs) / len(xs)\n"
        "    return 0.0\n";

    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kOverfitFix));
    const auto refinement_prompt = build_refinement_prompt(
        s.problem.text, s.plan.elements[0], "stats::t_mean_pair", "expected 3 got 0",
        kOverfitFix);
    builder.add(Role::Refinement, refinement_prompt, 0.0, code_json(still_broken));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0};
    SolutionEngine engine(gateway, config, s.pristine);

    auto set = engine.run(s.plan, s.problem, s.baseline, s.runner, s.factory());
    CHECK_FALSE(set.chosen.has_value());
    CHECK(set.candidates[0].status == CandidateStatus::Regressed);
    CHECK(set.candidates[0].refinement_attempted);
    CHECK(gateway.calls_for_role(Role::Refinement) == 1);
}

TEST_CASE("refinement is skipped entirely when any candidate survived outright") {
    Scenario s;
    testutil::TranscriptBuilder builder;
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.0, code_json(kOverfitFix));
    builder.add(Role::CodeGeneration, s.generation_prompt(), 0.4, code_json(kGoodFix));
    auto transcript = builder.write(s.tmp / "t.jsonl");

    llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
    EngineConfig config;
    config.schedule.temperatures = {0.0, 0.4};
    SolutionEngine engine(gateway, config, s.pristine);

    auto set = engine.run(s.plan, s.problem, s.baseline, s.runner, s.factory());
    REQUIRE(set.chosen.has_value());
    CHECK(*set.chosen == 1);
    CHECK(gateway.calls_for_role(Role::Refinement) == 0);
    CHECK(set.candidates[0].status == CandidateStatus::Regressed);
    CHECK_FALSE(set.candidates[0].refinement_attempted);
}
