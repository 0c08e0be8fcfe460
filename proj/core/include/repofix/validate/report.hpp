#pragma once
// Per-test outcomes and regression algebra. `error` counts as `fail` for
// regression purposes; `skip` is neutral. Elimination upstream keys on
// new_failures (plus vanished baseline passes, the conservative extension
// for broken test collection).

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>

namespace repofix::validate {

enum class TestOutcome { Pass, Fail, Error, Skip };

const char* to_string(TestOutcome outcome);
std::optional<TestOutcome> outcome_from_string(std::string_view s);

struct TestReport {
    std::map<std::string, TestOutcome> outcomes;
    std::map<std::string, std::string> messages;  // failure output, when known
    double wall_time = 0.0;
    bool truncated = false;  // timeout or unusable report
    std::string diagnostic;

    std::size_t count(TestOutcome outcome) const;
};

struct RegressionDiff {
    std::set<std::string> new_failures;   // pass -> fail/error
    std::set<std::string> new_passes;     // fail/error -> pass
    std::set<std::string> still_failing;  // fail -> fail
    std::set<std::string> vanished;       // present before, absent (or pass->skip) after

    bool empty() const {
        return new_failures.empty() && new_passes.empty() && still_failing.empty() &&
               vanished.empty();
    }
};

// Throws std::invalid_argument when either report is truncated.
RegressionDiff diff_reports(const TestReport& baseline, const TestReport& post);

// A candidate is eliminated when it breaks a passing test or makes one
// vanish from collection.
bool is_regression(const RegressionDiff& diff, const TestReport& baseline);

// Line protocol: one "<test-id> <pass|fail|error|skip> [message]" per line;
// non-matching lines are ignored as runner noise.
TestReport parse_line_protocol(const std::string& text);

// Minimal JUnit XML: <testcase classname=... name=...> with optional
// <failure>/<error>/<skipped> children. Test ids are "classname::name".
TestReport parse_junit_xml(const std::string& xml);

void to_json(nlohmann::json& j, const TestReport& r);
void from_json(const nlohmann::json& j, TestReport& r);
void to_json(nlohmann::json& j, const RegressionDiff& d);

}  // namespace repofix::validate
