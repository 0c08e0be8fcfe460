#include "doctest.h"

#include <random>

#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/validate/report.hpp"
#include "repofix/validate/runner.hpp"
#include "test_util.hpp"

using namespace repofix;
using namespace repofix::validate;

namespace {

TestReport report_of(std::initializer_list<std::pair<const char*, TestOutcome>> outcomes) {
    TestReport r;
    for (const auto& [id, outcome] : outcomes) r.outcomes[id] = outcome;
    return r;
}

}  // namespace

TEST_CASE("line protocol parses ids, statuses and messages, skipping noise") {
    auto report = parse_line_protocol(
        "collecting tests...\n"
        "t1 pass\n"
        "t2 fail expected 2.5 got 2\n"
        "t3 error boom\n"
        "t4 skip\n"
        "garbage line without status\n");
    CHECK(report.outcomes.size() == 4);
    CHECK(report.outcomes.at("t1") == TestOutcome::Pass);
    CHECK(report.outcomes.at("t2") == TestOutcome::Fail);
    CHECK(report.messages.at("t2") == "expected 2.5 got 2");
    CHECK(report.outcomes.at("t3") == TestOutcome::Error);
    CHECK(report.outcomes.at("t4") == TestOutcome::Skip);

    CHECK(parse_line_protocol("").outcomes.empty());
    CHECK_FALSE(parse_line_protocol("").truncated);
}

TEST_CASE("junit xml parses testcases with failure/error/skipped children") {
    const std::string xml = R"(<?xml version="1.0"?>
<testsuites>
  <testsuite name="suite" tests="4">
    <testcase classname="pkg.TestA" name="test_ok" time="0.01"/>
    <testcase classname="pkg.TestA" name="test_bad">
      <failure message="assert 1 == 2">traceback here</failure>
    </testcase>
    <testcase classname="pkg.TestB" name="test_boom">
      <error>ZeroDivisionError &amp; context</error>
    </testcase>
    <testcase classname="pkg.TestB" name="test_skipped">
      <skipped message="not on this platform"/>
    </testcase>
  </testsuite>
</testsuites>)";
    auto report = parse_junit_xml(xml);
    CHECK(report.outcomes.size() == 4);
    CHECK(report.outcomes.at("pkg.TestA::test_ok") == TestOutcome::Pass);
    CHECK(report.outcomes.at("pkg.TestA::test_bad") == TestOutcome::Fail);
    CHECK(report.messages.at("pkg.TestA::test_bad") == "assert 1 == 2");
    CHECK(report.outcomes.at("pkg.TestB::test_boom") == TestOutcome::Error);
    CHECK(report.messages.at("pkg.TestB::test_boom").find("ZeroDivisionError & context") !=
          std::string::npos);
    CHECK(report.outcomes.at("pkg.TestB::test_skipped") == TestOutcome::Skip);
}

TEST_CASE("diff_reports: the worked examples") {
    auto diff = diff_reports(report_of({{"t1", TestOutcome::Pass}, {"t2", TestOutcome::Fail}}),
                             report_of({{"t1", TestOutcome::Fail}, {"t2", TestOutcome::Fail}}));
    CHECK(diff.new_failures == std::set<std::string>{"t1"});
    CHECK(diff.still_failing == std::set<std::string>{"t2"});
    CHECK(diff.new_passes.empty());

    diff = diff_reports(report_of({{"t1", TestOutcome::Fail}}),
                        report_of({{"t1", TestOutcome::Pass}}));
    CHECK(diff.new_passes == std::set<std::string>{"t1"});

    diff = diff_reports(report_of({{"t1", TestOutcome::Pass},
                                   {"t2", TestOutcome::Pass},
                                   {"t3", TestOutcome::Fail}}),
                        report_of({{"t1", TestOutcome::Pass}, {"t3", TestOutcome::Pass}}));
    CHECK(diff.new_passes == std::set<std::string>{"t3"});
    CHECK(diff.vanished == std::set<std::string>{"t2"});
    CHECK(diff.new_failures.empty());
}

TEST_CASE("diff_reports: error counts as fail; skip transitions are neutral-ish") {
    // pass -> error is a new failure
    auto diff = diff_reports(report_of({{"t", TestOutcome::Pass}}),
                             report_of({{"t", TestOutcome::Error}}));
    CHECK(diff.new_failures == std::set<std::string>{"t"});

    // pass -> skip lands in vanished
    diff = diff_reports(report_of({{"t", TestOutcome::Pass}}),
                        report_of({{"t", TestOutcome::Skip}}));
    CHECK(diff.vanished == std::set<std::string>{"t"});
    CHECK(diff.new_failures.empty());

    // skip -> fail is not a new failure (baseline never passed)
    diff = diff_reports(report_of({{"t", TestOutcome::Skip}}),
                        report_of({{"t", TestOutcome::Fail}}));
    CHECK(diff.new_failures.empty());
}

TEST_CASE("diff_reports rejects truncated inputs") {
    TestReport truncated;
    truncated.truncated = true;
    CHECK_THROWS_AS(static_cast<void>(diff_reports(truncated, TestReport{})),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(diff_reports(TestReport{}, truncated)),
                    std::invalid_argument);
}

TEST_CASE("is_regression: new failures or vanished baseline passes eliminate") {
    auto baseline = report_of({{"t1", TestOutcome::Pass}, {"t2", TestOutcome::Fail}});
    RegressionDiff clean;
    CHECK_FALSE(is_regression(clean, baseline));

    RegressionDiff broken;
    broken.new_failures.insert("t1");
    CHECK(is_regression(broken, baseline));

    RegressionDiff vanished_pass;
    vanished_pass.vanished.insert("t1");
    CHECK(is_regression(vanished_pass, baseline));

    RegressionDiff vanished_fail;
    vanished_fail.vanished.insert("t2");
    CHECK_FALSE(is_regression(vanished_fail, baseline));
}

TEST_CASE("property: regression-diff algebra over 1000 random report pairs") {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> outcome_dist(0, 3);
    std::uniform_int_distribution<int> size_dist(0, 12);
    std::uniform_int_distribution<int> present_dist(0, 5);

    auto random_outcome = [&]() {
        switch (outcome_dist(rng)) {
            case 0: return TestOutcome::Pass;
            case 1: return TestOutcome::Fail;
            case 2: return TestOutcome::Error;
            default: return TestOutcome::Skip;
        }
    };

    for (int trial = 0; trial < 1000; ++trial) {
        TestReport a, b;
        const int n = size_dist(rng);
        for (int i = 0; i < n; ++i) {
            const std::string id = "t" + std::to_string(i);
            a.outcomes[id] = random_outcome();
            if (present_dist(rng) != 0) b.outcomes[id] = random_outcome();
        }

        // diff(r, r) is empty
        auto self = diff_reports(a, a);
        CHECK(self.new_failures.empty());
        CHECK(self.new_passes.empty());
        CHECK(self.vanished.empty());

        auto forward = diff_reports(a, b);

        // pairwise disjoint
        for (const auto& id : forward.new_failures) {
            CHECK(forward.new_passes.count(id) == 0);
            CHECK(forward.still_failing.count(id) == 0);
            CHECK(forward.vanished.count(id) == 0);
        }
        for (const auto& id : forward.new_passes) {
            CHECK(forward.still_failing.count(id) == 0);
            CHECK(forward.vanished.count(id) == 0);
        }
        for (const auto& id : forward.still_failing) CHECK(forward.vanished.count(id) == 0);

        // new_failures only ever contains baseline passes
        for (const auto& id : forward.new_failures)
            CHECK(a.outcomes.at(id) == TestOutcome::Pass);

        // antisymmetry over the shared id set
        auto backward = diff_reports(b, a);
        for (const auto& id : forward.new_failures) {
            if (b.outcomes.count(id)) CHECK(backward.new_passes.count(id) == 1);
        }
        for (const auto& id : forward.new_passes) {
            if (b.outcomes.count(id)) CHECK(backward.new_failures.count(id) == 1);
        }
    }
}

TEST_CASE("run_suite executes the fixture runner and parses line protocol") {
    testutil::TempDir tmp("runner");
    const auto ws = tmp / "ws";
    util::copy_tree(testutil::fixture("bugrepo"), ws);

    TestRunnerConfig config;
    config.command = {"python3", "run_tests.py"};
    config.timeout_seconds = 60;
    auto report = run_suite(ws.string(), config);
    CHECK_FALSE(report.truncated);
    CHECK(report.outcomes.size() == 5);
    CHECK(report.outcomes.at("stats::t_mean") == TestOutcome::Fail);
    CHECK(report.outcomes.at("stats::t_total") == TestOutcome::Pass);
    CHECK(report.messages.at("stats::t_mean") == "expected 2.5 got 2");
    CHECK(report.wall_time > 0.0);

    // determinism on an unchanged checkout
    auto again = run_suite(ws.string(), config);
    CHECK(again.outcomes == report.outcomes);
}

TEST_CASE("run_suite: {workspace} substitution and junit format") {
    testutil::TempDir tmp("runner_junit");
    const auto ws = tmp / "ws";
    std::filesystem::create_directories(ws);
    util::write_file(ws / "emit.py",
                     "import sys\n"
                     "xml = '''<testsuite><testcase classname=\"m\" name=\"ok\"/>\n"
                     "<testcase classname=\"m\" name=\"bad\"><failure message=\"nope\"/>"
                     "</testcase></testsuite>'''\n"
                     "open(sys.argv[1], 'w').write(xml)\n");

    TestRunnerConfig config;
    config.command = {"python3", "emit.py", "{workspace}/report.xml"};
    config.report_format = ReportFormat::JunitXml;
    config.report_file = "{workspace}/report.xml";
    config.timeout_seconds = 60;
    auto report = run_suite(ws.string(), config);
    CHECK_FALSE(report.truncated);
    CHECK(report.outcomes.at("m::ok") == TestOutcome::Pass);
    CHECK(report.outcomes.at("m::bad") == TestOutcome::Fail);
}

TEST_CASE("run_suite: timeout marks the report truncated") {
    testutil::TempDir tmp("runner_timeout");
    const auto ws = tmp / "ws";
    std::filesystem::create_directories(ws);
    util::write_file(ws / "slow.py", "import time\nprint('t1 pass', flush=True)\ntime.sleep(30)\n");

    TestRunnerConfig config;
    config.command = {"python3", "slow.py"};
    config.timeout_seconds = 1.0;
    auto report = run_suite(ws.string(), config);
    CHECK(report.truncated);
    CHECK(report.outcomes.count("t1") == 1);  // partial outcomes preserved
}

TEST_CASE("run_suite: unknown command is a fatal config error") {
    testutil::TempDir tmp("runner_missing");
    TestRunnerConfig config;
    config.command = {"no-such-binary-zzz"};
    config.timeout_seconds = 5;
    CHECK_THROWS_AS(static_cast<void>(run_suite(tmp.path().string(), config)), ConfigError);
}

TEST_CASE("test report json round-trips") {
    TestReport report;
    report.outcomes["a"] = TestOutcome::Pass;
    report.outcomes["b"] = TestOutcome::Error;
    report.messages["b"] = "boom";
    report.wall_time = 1.25;
    nlohmann::json j = report;
    auto back = j.get<TestReport>();
    CHECK(back.outcomes == report.outcomes);
    CHECK(back.messages == report.messages);
    CHECK(back.wall_time == report.wall_time);
}
