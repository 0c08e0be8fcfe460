#include "repofix/validate/report.hpp"

#include <sstream>
#include <stdexcept>

#include "repofix/util/strings.hpp"

namespace repofix::validate {

const char* to_string(TestOutcome outcome) {
    switch (outcome) {
        case TestOutcome::Pass: return "pass";
        case TestOutcome::Fail: return "fail";
        case TestOutcome::Error: return "error";
        case TestOutcome::Skip: return "skip";
    }
    return "fail";
}

std::optional<TestOutcome> outcome_from_string(std::string_view s) {
    if (s == "pass") return TestOutcome::Pass;
    if (s == "fail") return TestOutcome::Fail;
    if (s == "error") return TestOutcome::Error;
    if (s == "skip") return TestOutcome::Skip;
    return std::nullopt;
}

std::size_t TestReport::count(TestOutcome outcome) const {
    std::size_t n = 0;
    for (const auto& [id, o] : outcomes)
        if (o == outcome) ++n;
    return n;
}

namespace {
bool failing(TestOutcome o) { return o == TestOutcome::Fail || o == TestOutcome::Error; }
}  // namespace

RegressionDiff diff_reports(const TestReport& baseline, const TestReport& post) {
    if (baseline.truncated || post.truncated)
        throw std::invalid_argument("cannot diff truncated test reports");
    RegressionDiff diff;
    for (const auto& [id, before] : baseline.outcomes) {
        auto it = post.outcomes.find(id);
        if (it == post.outcomes.end()) {
            diff.vanished.insert(id);
            continue;
        }
        const TestOutcome after = it->second;
        if (before == TestOutcome::Pass && failing(after))
            diff.new_failures.insert(id);
        else if (failing(before) && after == TestOutcome::Pass)
            diff.new_passes.insert(id);
        else if (failing(before) && failing(after))
            diff.still_failing.insert(id);
        else if (before == TestOutcome::Pass && after == TestOutcome::Skip)
            diff.vanished.insert(id);
        // skip->anything and pass->pass are neutral
    }
    return diff;
}

bool is_regression(const RegressionDiff& diff, const TestReport& baseline) {
    if (!diff.new_failures.empty()) return true;
    for (const auto& id : diff.vanished) {
        auto it = baseline.outcomes.find(id);
        if (it != baseline.outcomes.end() && it->second == TestOutcome::Pass) return true;
    }
    return false;
}

TestReport parse_line_protocol(const std::string& text) {
    TestReport report;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string id, status;
        if (!(ls >> id >> status)) continue;
        auto outcome = outcome_from_string(status);
        if (!outcome) continue;
        report.outcomes[id] = *outcome;
        std::string rest;
        std::getline(ls, rest);
        rest = util::trim(rest);
        if (!rest.empty()) report.messages[id] = rest;
    }
    return report;
}

static nlohmann::json outcomes_json(const std::map<std::string, TestOutcome>& outcomes) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [id, o] : outcomes) j[id] = to_string(o);
    return j;
}

void to_json(nlohmann::json& j, const TestReport& r) {
    j = nlohmann::json{{"outcomes", outcomes_json(r.outcomes)},
                       {"messages", r.messages},
                       {"wall_time", r.wall_time},
                       {"truncated", r.truncated},
                       {"diagnostic", r.diagnostic}};
}

void from_json(const nlohmann::json& j, TestReport& r) {
    r.outcomes.clear();
    for (const auto& [id, val] : j.at("outcomes").items()) {
        auto outcome = outcome_from_string(val.get<std::string>());
        if (outcome) r.outcomes[id] = *outcome;
    }
    r.messages = j.value("messages", std::map<std::string, std::string>{});
    r.wall_time = j.value("wall_time", 0.0);
    r.truncated = j.value("truncated", false);
    r.diagnostic = j.value("diagnostic", std::string{});
}

void to_json(nlohmann::json& j, const RegressionDiff& d) {
    j = nlohmann::json{{"new_failures", d.new_failures},
                       {"new_passes", d.new_passes},
                       {"still_failing", d.still_failing},
                       {"vanished", d.vanished}};
}

}  // namespace repofix::validate
