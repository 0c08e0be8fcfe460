#include "doctest.h"

#include "repofix/edit/span.hpp"
#include "repofix/indexer/embedding_doc.hpp"
#include "repofix/indexer/python_parser.hpp"
#include "repofix/localize/localizer.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/vector/embedder.hpp"
#include "test_util.hpp"

using namespace repofix;
using namespace repofix::localize;
using llm::Role;

namespace {

ProblemStatement fixture_problem() {
    ProblemStatement problem;
    problem.text = "mean() truncates the average to an integer";
    problem.repo_root = testutil::fixture("bugrepo").string();
    return problem;
}

llm::Gateway replay_gateway(const testutil::TranscriptBuilder& builder,
                            const std::filesystem::path& path) {
    builder.write(path);
    return llm::Gateway(std::make_shared<llm::ReplayBackend>(path));
}

LocalizerConfig test_config() {
    LocalizerConfig config;
    config.retry_budget = 1;
    return config;
}

}  // namespace

TEST_CASE("generate_queries: scripted three-query response") {
    testutil::TempDir tmp("queries");
    auto problem = fixture_problem();
    const auto prompt = build_query_generation_prompt(problem, 3);

    testutil::TranscriptBuilder builder;
    builder.add(Role::QueryGeneration, prompt, 0.0,
                R"(["integer division in mean", "average truncated", "stats mean float"])");
    auto gateway = replay_gateway(builder, tmp / "t.jsonl");
    Localizer localizer(gateway, test_config());

    auto queries = localizer.generate_queries(problem, 3);
    CHECK(queries.n() == 3);
    CHECK(queries.queries[0] == "integer division in mean");
}

TEST_CASE("generate_queries pads a short response with the problem text, deduplicated") {
    testutil::TempDir tmp("queries_pad");
    auto problem = fixture_problem();
    const auto prompt = build_query_generation_prompt(problem, 3);

    testutil::TranscriptBuilder builder;
    builder.add(Role::QueryGeneration, prompt, 0.0, R"(["only one query"])");
    auto gateway = replay_gateway(builder, tmp / "t.jsonl");
    Localizer localizer(gateway, test_config());

    auto queries = localizer.generate_queries(problem, 3);
    CHECK(queries.n() == 2);  // one model query + problem text, deduped
    CHECK(queries.queries[1] == problem.text);
}

TEST_CASE("generate_queries rejects an empty problem statement") {
    testutil::TempDir tmp("queries_empty");
    testutil::TranscriptBuilder builder;
    auto gateway = replay_gateway(builder, tmp / "t.jsonl");
    Localizer localizer(gateway, test_config());
    ProblemStatement empty;
    empty.text = "   ";
    CHECK_THROWS_AS(static_cast<void>(localizer.generate_queries(empty, 2)),
                    std::invalid_argument);
}

TEST_CASE("retrieve_candidate_files ranks files by max score across queries") {
    vector::HashEmbedder embedder(64);
    vector::VectorIndex index(64);

    auto add_doc = [&](const std::string& file, const std::string& name, const std::string& text) {
        indexer::EmbeddingDocument doc;
        doc.document = text;
        doc.file_name = file;
        doc.unit_qualified_name = name;
        doc.unit_start_line = 1;
        index.add(embedder.embed(text), doc);
    };
    add_doc("stats.py", "mean", "Method mean computes truncated integer average division");
    add_doc("stats.py", "total", "Method total computes sum");
    add_doc("textkit.py", "shout", "Method shout uppercases strings loudly");

    QuerySet queries;
    queries.queries = {"integer average division mean"};
    auto files = Localizer::retrieve_candidate_files(queries, index, embedder, 3);
    REQUIRE(files.size() >= 1);
    CHECK(files[0].path == "stats.py");
    // one entry per file (dedupe), ordered by score
    for (std::size_t i = 1; i < files.size(); ++i) CHECK(files[i - 1].score >= files[i].score);

    vector::VectorIndex empty(64);
    CHECK_THROWS(Localizer::retrieve_candidate_files(queries, empty, embedder, 3));
}

TEST_CASE("locate_files_from_map validates paths, warns and clamps") {
    testutil::TempDir tmp("locator");
    indexer::RepoFileMap map;
    map.entries["."] = {"stats.py", "textkit.py"};
    map.entries["pkg"] = {"mod.py"};

    auto problem = fixture_problem();
    LocalizerConfig config = test_config();
    config.repo_map_char_budget = 1u << 20;
    bool truncated = false;
    const auto rendered = indexer::render_repo_map_budgeted(map, config.repo_map_char_budget,
                                                            &truncated);
    const auto prompt = build_file_locator_prompt(problem, rendered, 2);

    testutil::TranscriptBuilder builder;
    builder.add(Role::FileLocator, prompt, 0.0,
                R"(["stats.py", "made_up/ghost.py", "pkg/mod.py", "textkit.py"])");
    auto gateway = replay_gateway(builder, tmp / "t.jsonl");
    Localizer localizer(gateway, config);

    std::vector<std::string> warnings;
    auto files = localizer.locate_files_from_map(problem, map, 2, warnings);
    // clamped to m=2 first, hallucinated path dropped with a warning
    CHECK(files == std::vector<std::string>{"stats.py"});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("ghost.py") != std::string::npos);
}

TEST_CASE("locate_files_from_map degrades to an empty list on unusable output") {
    testutil::TempDir tmp("locator_bad");
    indexer::RepoFileMap map;
    map.entries["."] = {"stats.py"};
    auto problem = fixture_problem();
    LocalizerConfig config = test_config();
    config.retry_budget = 0;
    bool truncated = false;
    const auto rendered =
        indexer::render_repo_map_budgeted(map, config.repo_map_char_budget, &truncated);
    const auto prompt = build_file_locator_prompt(problem, rendered, 5);

    testutil::TranscriptBuilder builder;
    builder.add(Role::FileLocator, prompt, 0.0, "I rather feel like prose today.");
    auto gateway = replay_gateway(builder, tmp / "t.jsonl");
    Localizer localizer(gateway, config);

    std::vector<std::string> warnings;
    auto files = localizer.locate_files_from_map(problem, map, 5, warnings);
    CHECK(files.empty());
    CHECK_FALSE(warnings.empty());
}

TEST_CASE("union_candidates: rag first, map additions tagged, capped") {
    std::vector<ScoredFile> rag = {{"a.py", 0.9}, {"b.py", 0.5}};
    std::vector<std::string> map_based = {"b.py", "c.py"};
    auto set = Localizer::union_candidates(rag, map_based, 5);
    REQUIRE(set.ranked_files.size() == 3);
    CHECK(set.ranked_files[0].path == "a.py");
    CHECK(set.ranked_files[1].path == "b.py");
    CHECK(set.ranked_files[1].provenance ==
          std::set<Provenance>{Provenance::Rag, Provenance::FileMap});
    CHECK(set.ranked_files[2].path == "c.py");
    CHECK(set.ranked_files[2].provenance == std::set<Provenance>{Provenance::FileMap});

    // truncation
    std::vector<ScoredFile> six = {{"a.py", .9}, {"b.py", .8}, {"c.py", .7},
                                   {"d.py", .6}, {"e.py", .5}, {"f.py", .4}};
    auto capped = Localizer::union_candidates(six, {}, 5);
    CHECK(capped.ranked_files.size() == 5);
    CHECK(capped.ranked_files.back().path == "e.py");

    CHECK_THROWS_AS(static_cast<void>(Localizer::union_candidates({}, {}, 5)),
                    LocalizationError);

    // idempotence: union of the output with an empty second list is stable
    std::vector<ScoredFile> again;
    for (const auto& c : capped.ranked_files) again.push_back({c.path, c.score});
    auto twice = Localizer::union_candidates(again, {}, 5);
    CHECK(twice.paths() == capped.paths());
}

TEST_CASE("preassimilate keeps valid selections, clamps to l_max, falls back") {
    testutil::TempDir tmp("preassim");
    auto problem = fixture_problem();

    CandidateFileSet candidates;
    for (const auto& path : {"stats.py", "textkit.py", "extra.py"}) {
        CandidateFile f;
        f.path = path;
        f.provenance.insert(Provenance::Rag);
        candidates.ranked_files.push_back(f);
    }
    std::vector<indexer::FileSchematic> schematics;  // empty map is fine for the prompt
    const auto prompt =
        build_preassimilator_prompt(problem, indexer::render_schematic_map(schematics), 2);

    SUBCASE("clamp to l_max") {
        testutil::TranscriptBuilder builder;
        builder.add(Role::Preassimilator, prompt, 0.0,
                    R"({"files": ["stats.py", "textkit.py", "extra.py"], "rationale": "all"})");
        auto gateway = replay_gateway(builder, tmp / "t.jsonl");
        Localizer localizer(gateway, test_config());
        std::vector<std::string> warnings;
        auto selection = localizer.preassimilate(problem, candidates, schematics, 2, warnings);
        CHECK(selection.files == std::vector<std::string>{"stats.py", "textkit.py"});
        CHECK(selection.rationale == "all");
    }

    SUBCASE("hallucinated-only selection falls back to the top candidate") {
        testutil::TranscriptBuilder builder;
        builder.add(Role::Preassimilator, prompt, 0.0,
                    R"({"files": ["ghost.py"], "rationale": "wrong"})");
        auto gateway = replay_gateway(builder, tmp / "t2.jsonl");
        Localizer localizer(gateway, test_config());
        std::vector<std::string> warnings;
        auto selection = localizer.preassimilate(problem, candidates, schematics, 2, warnings);
        CHECK(selection.files == std::vector<std::string>{"stats.py"});
        CHECK(selection.rationale == "fallback");
        CHECK_FALSE(warnings.empty());
    }
}

TEST_CASE("parse_locations validates against the live parse with one retry") {
    testutil::TempDir tmp("locations");
    auto problem = fixture_problem();
    const std::string file = "stats.py";
    const std::string content =
        util::read_file(std::filesystem::path(problem.repo_root) / file);
    const auto prompt = build_coder_parser_prompt(problem, file, content);

    SUBCASE("valid location resolves to a plan element") {
        testutil::TranscriptBuilder builder;
        builder.add(Role::CoderParser, prompt, 0.0,
                    R"([{"level": "method", "name": "mean", "start_line": 9,
                         "instruction": "use true division"}])");
        auto gateway = replay_gateway(builder, tmp / "t.jsonl");
        Localizer localizer(gateway, test_config());
        std::vector<std::string> warnings;
        auto plan = localizer.parse_locations(problem, file, content, warnings);
        REQUIRE(plan.ok());
        REQUIRE(plan->size() == 1);
        CHECK((*plan)[0].location.name == "mean");
        CHECK((*plan)[0].location.file == file);
    }

    SUBCASE("invalid location triggers one retry carrying the error, then drops") {
        testutil::TranscriptBuilder builder;
        builder.add(Role::CoderParser, prompt, 0.0,
                    R"([{"level": "method", "name": "no_such", "start_line": 9,
                         "instruction": "x"}])");
        // the retry prompt carries the resolution diagnostic
        auto schematic_error =
            edit::resolve_span(content, [&] {
                RelevantLocation loc;
                loc.level = LocationLevel::Method;
                loc.name = "no_such";
                loc.start_line = 9;
                loc.file = file;
                return loc;
            }());
        REQUIRE_FALSE(schematic_error.ok());
        const auto retry_prompt = prompt + llm::retry_section(schematic_error.error);
        builder.add(Role::CoderParser, retry_prompt, 0.0,
                    R"([{"level": "method", "name": "mean", "start_line": 9,
                         "instruction": "fix"}])");
        auto gateway = replay_gateway(builder, tmp / "t2.jsonl");
        Localizer localizer(gateway, test_config());
        std::vector<std::string> warnings;
        auto plan = localizer.parse_locations(problem, file, content, warnings);
        REQUIRE(plan.ok());
        CHECK(plan->size() == 1);
        CHECK((*plan)[0].location.name == "mean");
        CHECK(gateway.calls_for_role(Role::CoderParser) == 2);
    }
}

TEST_CASE("full localize stage is reproducible with replay + hash embedder") {
    auto problem = fixture_problem();

    // build index artifacts in-memory from the fixture repo
    indexer::IndexConfig index_config;
    auto scan = indexer::scan_repository(problem.repo_root, index_config);
    std::map<std::string, indexer::FileSchematic> schematics;
    vector::HashEmbedder embedder(64);
    vector::VectorIndex index(64);
    for (const auto& path : scan.map.all_paths()) {
        auto schematic = indexer::parse_file(
            path, util::read_file(std::filesystem::path(problem.repo_root) / path));
        for (const auto& doc : indexer::build_embedding_documents(schematic))
            index.add(embedder.embed(doc.document), doc);
        schematics[path] = std::move(schematic);
    }

    LocalizerConfig config = test_config();
    config.n_queries = 2;

    // script the four stages against the exact prompts
    const auto qg_prompt = build_query_generation_prompt(problem, 2);
    testutil::TranscriptBuilder builder;
    builder.add(Role::QueryGeneration, qg_prompt, 0.0,
                R"(["mean integer division truncated", "average float"])");

    bool truncated = false;
    const auto map_rendered =
        indexer::render_repo_map_budgeted(scan.map, config.repo_map_char_budget, &truncated);
    builder.add(Role::FileLocator, build_file_locator_prompt(problem, map_rendered, 5), 0.0,
                R"(["stats.py"])");

    auto run_once = [&](const std::filesystem::path& transcript) {
        // candidate set must be known to script preassimilation; compute the
        // stage-1 result the same way the localizer will
        QuerySet queries;
        queries.queries = {"mean integer division truncated", "average float"};
        auto rag = Localizer::retrieve_candidate_files(queries, index, embedder,
                                                       config.per_query_k);
        auto candidates = Localizer::union_candidates(
            rag, {"stats.py"}, static_cast<std::size_t>(config.union_cap));
        std::vector<indexer::FileSchematic> candidate_schematics;
        for (const auto& c : candidates.ranked_files)
            candidate_schematics.push_back(schematics.at(c.path));

        testutil::TranscriptBuilder full = builder;
        full.add(Role::Preassimilator,
                 build_preassimilator_prompt(
                     problem, indexer::render_schematic_map(candidate_schematics), config.l_max),
                 0.0, R"({"files": ["stats.py"], "rationale": "mean lives here"})");
        const std::string content =
            util::read_file(std::filesystem::path(problem.repo_root) / "stats.py");
        full.add(Role::CoderParser, build_coder_parser_prompt(problem, "stats.py", content), 0.0,
                 R"([{"level": "method", "name": "mean", "start_line": 9,
                      "instruction": "use true division"}])");
        full.write(transcript);

        llm::Gateway gateway(std::make_shared<llm::ReplayBackend>(transcript));
        Localizer localizer(gateway, config);
        return localizer.localize(problem, scan.map, schematics, index, embedder);
    };

    testutil::TempDir tmp("full_localize");
    auto first = run_once(tmp / "t1.jsonl");
    auto second = run_once(tmp / "t2.jsonl");

    CHECK(first.selection.files == std::vector<std::string>{"stats.py"});
    REQUIRE(first.plan.elements.size() == 1);
    CHECK(first.plan.elements[0].location.name == "mean");

    // bit-reproducible: identical outcomes serialize identically
    nlohmann::json a = {{"candidates", first.candidates},
                        {"selection", first.selection},
                        {"plan", first.plan}};
    nlohmann::json b = {{"candidates", second.candidates},
                        {"selection", second.selection},
                        {"plan", second.plan}};
    CHECK(a.dump() == b.dump());

    // candidate-set cap honored
    CHECK(first.candidates.ranked_files.size() <=
          static_cast<std::size_t>(config.union_cap));
}
