#pragma once
// Runs the repository test suite in a workspace and parses per-test
// outcomes. The command is an argv template; "{workspace}" expands to the
// workspace root in arguments, the report-file path and the working dir.

#include <map>
#include <string>
#include <vector>

#include "repofix/validate/report.hpp"

namespace repofix::validate {

enum class ReportFormat { LineProtocol, JunitXml };

struct TestRunnerConfig {
    std::vector<std::string> command;  // argv template
    ReportFormat report_format = ReportFormat::LineProtocol;
    double timeout_seconds = 600.0;
    std::map<std::string, std::string> env;
    std::string report_file;  // JUnit only; may contain {workspace}
};

// Executes the configured suite in `workspace`. Timeouts and unparseable
// reports yield truncated=true with whatever partial outcomes exist; an
// unresolvable command is a fatal ConfigError.
TestReport run_suite(const std::string& workspace, const TestRunnerConfig& config);

}  // namespace repofix::validate
