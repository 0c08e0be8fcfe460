#include "doctest.h"

#include <random>

#include "repofix/edit/diff.hpp"
#include "repofix/edit/span.hpp"
#include "repofix/edit/splice.hpp"
#include "repofix/indexer/python_parser.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/strings.hpp"
#include "test_util.hpp"

using namespace repofix;
using localize::LocationLevel;
using localize::RelevantLocation;

namespace {

const std::string kFixtureFile =
    "import os\n"                            // 1
    "\n"                                     // 2
    "LIMIT = 10\n"                           // 3
    "\n"                                     // 4
    "\n"                                     // 5
    "class A:\n"                             // 6
    "    def g(self):\n"                     // 7
    "        return LIMIT\n"                 // 8
    "\n"                                     // 9
    "    @staticmethod\n"                    // 10
    "    def helper():\n"                    // 11
    "        return os.getcwd()\n"           // 12
    "\n"                                     // 13
    "def f(x):\n"                            // 14
    "    if x:\n"                            // 15
    "        return x + LIMIT\n"             // 16
    "    return 0\n";                        // 17

RelevantLocation method_loc(const std::string& name, int start, const std::string& file = "m.py") {
    RelevantLocation loc;
    loc.level = LocationLevel::Method;
    loc.name = name;
    loc.start_line = start;
    loc.file = file;
    return loc;
}

}  // namespace

TEST_CASE("resolve_span: method includes decorators and derives the indent") {
    auto target = edit::resolve_span(kFixtureFile, method_loc("A.helper", 10));
    REQUIRE(target.ok());
    CHECK(target->span_start == 10);  // @staticmethod line
    CHECK(target->span_end == 12);
    CHECK(target->indent == "    ");

    // snap tolerance: start_line off by one resolves to the same unit
    auto snapped = edit::resolve_span(kFixtureFile, method_loc("A.helper", 11));
    REQUIRE(snapped.ok());
    CHECK(snapped->span_start == 10);

    // bare method name also matches
    auto bare = edit::resolve_span(kFixtureFile, method_loc("helper", 10));
    REQUIRE(bare.ok());
}

TEST_CASE("resolve_span: top_level spans are verbatim and must avoid units") {
    RelevantLocation loc;
    loc.level = LocationLevel::TopLevel;
    loc.start_line = 1;
    loc.end_line = 3;
    loc.file = "m.py";
    auto target = edit::resolve_span(kFixtureFile, loc);
    REQUIRE(target.ok());
    CHECK(target->span_start == 1);
    CHECK(target->span_end == 3);
    CHECK(target->indent.empty());

    loc.start_line = 5;
    loc.end_line = 8;  // overlaps class A
    auto bad = edit::resolve_span(kFixtureFile, loc);
    CHECK_FALSE(bad.ok());
    CHECK(bad.error.find("intersects") != std::string::npos);
}

TEST_CASE("resolve_span failures carry actionable diagnostics") {
    auto missing = edit::resolve_span(kFixtureFile, method_loc("nope", 3));
    CHECK_FALSE(missing.ok());
    CHECK(missing.error.find("no method named") != std::string::npos);

    auto far = edit::resolve_span(kFixtureFile, method_loc("f", 2));  // start 14, off by 12
    CHECK_FALSE(far.ok());
    CHECK(far.error.find("start line") != std::string::npos);

    RelevantLocation cls;
    cls.level = LocationLevel::Class;
    cls.name = "A";
    cls.start_line = 6;
    cls.file = "m.py";
    auto class_target = edit::resolve_span(kFixtureFile, cls);
    REQUIRE(class_target.ok());
    CHECK(class_target->span_start == 6);
    CHECK(class_target->span_end == 12);
}

TEST_CASE("splice: identity replacement is byte-identical") {
    auto target = edit::resolve_span(kFixtureFile, method_loc("A.helper", 10));
    REQUIRE(target.ok());
    const std::string original =
        edit::extract_span(kFixtureFile, target->span_start, target->span_end);
    edit::GeneratedCode identity{util::dedent(original), 0.0, 1};
    auto result = edit::splice(kFixtureFile, *target, identity);
    REQUIRE(result.ok());
    CHECK(result->syntax_ok);
    CHECK(result->new_content == kFixtureFile);
}

TEST_CASE("splice: column-0 replacement is re-indented to the target") {
    auto target = edit::resolve_span(kFixtureFile, method_loc("A.g", 7));
    REQUIRE(target.ok());
    edit::GeneratedCode replacement{"def g(self):\n    return LIMIT * 2\n", 0.0, 1};
    auto result = edit::splice(kFixtureFile, *target, replacement);
    REQUIRE(result.ok());
    REQUIRE(result->syntax_ok);
    CHECK(result->new_content.find("    def g(self):\n        return LIMIT * 2\n") !=
          std::string::npos);

    auto schematic = indexer::parse_file("m.py", result->new_content);
    REQUIRE(schematic.parse_ok);
    bool found = false;
    for (const auto& unit : schematic.units)
        if (unit.qualified_name == "A.g") found = true;
    CHECK(found);
}

TEST_CASE("splice rejects unparseable replacements before touching content") {
    auto target = edit::resolve_span(kFixtureFile, method_loc("f", 14));
    REQUIRE(target.ok());
    edit::GeneratedCode broken{"def f(:\n    pass\n", 0.0, 1};
    auto result = edit::splice(kFixtureFile, *target, broken);
    CHECK_FALSE(result.ok());
    CHECK(result.error.find("does not parse") != std::string::npos);
}

TEST_CASE("splice preserves bytes outside the span exactly") {
    auto target = edit::resolve_span(kFixtureFile, method_loc("f", 14));
    REQUIRE(target.ok());
    edit::GeneratedCode replacement{"def f(x):\n    return max(x, 0) + LIMIT\n", 0.0, 1};
    auto result = edit::splice(kFixtureFile, *target, replacement);
    REQUIRE(result.ok());

    bool nl = false;
    auto before = util::split_lines(kFixtureFile, &nl);
    auto after = util::split_lines(result->new_content, &nl);
    // prefix [1, 13] identical
    for (int i = 0; i < 13; ++i) CHECK(before[i] == after[i]);
}

TEST_CASE("splice: trailing blank lines of the replacement are dropped") {
    auto target = edit::resolve_span(kFixtureFile, method_loc("A.g", 7));
    REQUIRE(target.ok());
    edit::GeneratedCode padded{"def g(self):\n    return 1\n\n\n", 0.0, 1};
    auto result = edit::splice(kFixtureFile, *target, padded);
    REQUIRE(result.ok());
    CHECK(result->syntax_ok);
    CHECK(result->new_content.find("return 1\n\n    @staticmethod") != std::string::npos);
}

TEST_CASE("splice handles files without a trailing newline") {
    const std::string no_nl = "def f():\n    return 1";
    auto target = edit::resolve_span(no_nl, method_loc("f", 1, "x.py"));
    REQUIRE(target.ok());
    const std::string span = edit::extract_span(no_nl, 1, 2);
    auto result = edit::splice(no_nl, *target, {span, 0.0, 1});
    REQUIRE(result.ok());
    CHECK(result->new_content == no_nl);
}

TEST_CASE("apply_plan_element writes only on success and reapplies sequentially") {
    testutil::TempDir tmp("apply");
    const auto ws = tmp / "ws";
    std::filesystem::create_directories(ws);
    util::write_file(ws / "m.py", kFixtureFile);

    localize::PlanElement first;
    first.location = method_loc("A.g", 7);
    first.instruction = "double it";
    auto r1 = edit::apply_plan_element(ws.string(), first,
                                       {"def g(self):\n    return LIMIT * 2\n", 0.0, 1});
    REQUIRE(r1.ok());

    // second element resolves against post-first content (f moved by 0 lines
    // here, but resolution re-parses regardless)
    localize::PlanElement second;
    second.location = method_loc("f", 14);
    second.instruction = "clamp";
    auto r2 = edit::apply_plan_element(ws.string(), second,
                                       {"def f(x):\n    return max(x, 0)\n", 0.0, 1});
    REQUIRE(r2.ok());

    const std::string content = util::read_file(ws / "m.py");
    CHECK(content.find("LIMIT * 2") != std::string::npos);
    CHECK(content.find("max(x, 0)") != std::string::npos);
    auto schematic = indexer::parse_file("m.py", content);
    CHECK(schematic.parse_ok);

    // failing element leaves the file untouched
    const std::string before = content;
    localize::PlanElement bad;
    bad.location = method_loc("A.g", 7);
    bad.instruction = "break";
    auto r3 = edit::apply_plan_element(ws.string(), bad, {"def g(:\n", 0.0, 1});
    CHECK_FALSE(r3.ok());
    CHECK(util::read_file(ws / "m.py") == before);

    // element on a missing file errors
    localize::PlanElement missing;
    missing.location = method_loc("gone", 1, "nope.py");
    auto r4 = edit::apply_plan_element(ws.string(), missing, {"def gone():\n    pass\n", 0.0, 1});
    CHECK_FALSE(r4.ok());
    CHECK(r4.error.find("does not exist") != std::string::npos);
}

TEST_CASE("unified diff: empty for identical, minimal hunks otherwise") {
    CHECK(edit::make_unified_diff("a\nb\n", "a\nb\n", "x.py").empty());

    const std::string old_text = "a\nb\nc\nd\ne\nf\ng\nh\ni\nj\n";
    const std::string new_text = "a\nb\nc\nd\nE\nf\ng\nh\ni\nj\n";
    auto diff = edit::make_unified_diff(old_text, new_text, "x.py");
    CHECK(diff.find("--- a/x.py\n+++ b/x.py\n") == 0);
    CHECK(diff.find("@@ -2,7 +2,7 @@\n") != std::string::npos);
    CHECK(diff.find("-e\n+E\n") != std::string::npos);
    // minimal-diff: untouched head/tail lines appear only as context
    CHECK(diff.find("-a\n") == std::string::npos);
    CHECK(diff.find("-j\n") == std::string::npos);
}

TEST_CASE("unified diff round-trips through apply_unified_diff") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> lines_dist(1, 40);
    std::uniform_int_distribution<int> token_dist(0, 6);
    std::uniform_int_distribution<int> edit_dist(0, 3);

    auto random_file = [&]() {
        std::string out;
        const int n = lines_dist(rng);
        for (int i = 0; i < n; ++i)
            out += "line_" + std::to_string(token_dist(rng)) + "\n";
        return out;
    };

    for (int trial = 0; trial < 60; ++trial) {
        const std::string old_text = random_file();
        bool nl = false;
        auto lines = util::split_lines(old_text, &nl);
        // random mutation: drop, insert, or change lines
        std::vector<std::string> mutated;
        for (const auto& line : lines) {
            switch (edit_dist(rng)) {
                case 0: break;  // drop
                case 1:
                    mutated.push_back(line);
                    mutated.push_back("inserted_" + std::to_string(token_dist(rng)));
                    break;
                case 2: mutated.push_back(line + "_x"); break;
                default: mutated.push_back(line);
            }
        }
        const std::string new_text = util::join_lines(mutated, true);
        auto diff = edit::make_unified_diff(old_text, new_text, "f.txt");

        testutil::TempDir tmp("diffrt");
        util::write_file(tmp / "f.txt", old_text);
        edit::apply_unified_diff(tmp.path(), diff);
        INFO("trial ", trial, "\ndiff:\n", diff);
        CHECK(util::read_file(tmp / "f.txt") == new_text);
    }
}

TEST_CASE("apply_unified_diff creates and deletes files via /dev/null") {
    testutil::TempDir tmp("diffnew");
    const std::string create_diff =
        "--- /dev/null\n"
        "+++ b/new.py\n"
        "@@ -0,0 +1,2 @@\n"
        "+x = 1\n"
        "+y = 2\n";
    edit::apply_unified_diff(tmp.path(), create_diff);
    CHECK(util::read_file(tmp / "new.py") == "x = 1\ny = 2\n");

    const std::string delete_diff =
        "--- a/new.py\n"
        "+++ /dev/null\n"
        "@@ -1,2 +0,0 @@\n"
        "-x = 1\n"
        "-y = 2\n";
    edit::apply_unified_diff(tmp.path(), delete_diff);
    CHECK_FALSE(std::filesystem::exists(tmp / "new.py"));
}

TEST_CASE("apply_unified_diff rejects hunks that do not match") {
    testutil::TempDir tmp("diffbad");
    util::write_file(tmp / "f.txt", "one\ntwo\n");
    const std::string diff =
        "--- a/f.txt\n"
        "+++ b/f.txt\n"
        "@@ -1,2 +1,2 @@\n"
        " one\n"
        "-THREE\n"
        "+four\n";
    CHECK_THROWS_WITH_AS(edit::apply_unified_diff(tmp.path(), diff),
                         doctest::Contains("does not apply"), Error);
}

TEST_CASE("diff handles missing trailing newlines") {
    auto diff = edit::make_unified_diff("a\nb", "a\nc", "f.txt");
    CHECK(diff.find("\\ No newline at end of file") != std::string::npos);

    testutil::TempDir tmp("diffnonl");
    util::write_file(tmp / "f.txt", "a\nb");
    edit::apply_unified_diff(tmp.path(), diff);
    CHECK(util::read_file(tmp / "f.txt") == "a\nc");
}
