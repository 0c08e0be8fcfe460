#include "repofix/validate/runner.hpp"

#include <chrono>
#include <filesystem>

#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/subprocess.hpp"

namespace repofix::validate {

namespace {

std::string substitute_workspace(const std::string& arg, const std::string& workspace) {
    std::string out = arg;
    std::size_t pos = 0;
    while ((pos = out.find("{workspace}", pos)) != std::string::npos) {
        out.replace(pos, 11, workspace);
        pos += workspace.size();
    }
    return out;
}

}  // namespace

TestReport run_suite(const std::string& workspace, const TestRunnerConfig& config) {
    if (config.command.empty()) throw ConfigError("test runner command is empty");
    if (config.timeout_seconds <= 0) throw ConfigError("test runner timeout must be positive");

    std::vector<std::string> argv;
    argv.reserve(config.command.size());
    for (const auto& arg : config.command) argv.push_back(substitute_workspace(arg, workspace));

    const auto start = std::chrono::steady_clock::now();
    auto result = util::run_command(argv, workspace, config.env, config.timeout_seconds);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    if (result.spawn_failed)
        throw ConfigError("test runner command could not be started (" + argv[0] +
                          "): " + result.spawn_error);

    TestReport report;
    report.wall_time = elapsed.count();

    if (config.report_format == ReportFormat::LineProtocol) {
        report = parse_line_protocol(result.stdout_text);
    } else {
        std::string path = substitute_workspace(config.report_file, workspace);
        if (path.empty()) {
            report.truncated = true;
            report.diagnostic = "junit_xml format requires report_file";
            report.wall_time = elapsed.count();
            return report;
        }
        if (std::filesystem::exists(path)) {
            report = parse_junit_xml(util::read_file(path));
        } else {
            report.truncated = true;
            report.diagnostic = "junit report file not written: " + path;
        }
    }
    report.wall_time = elapsed.count();
    if (result.timed_out) {
        report.truncated = true;
        report.diagnostic = "test runner exceeded timeout of " +
                            std::to_string(config.timeout_seconds) + "s";
    }
    return report;
}

}  // namespace repofix::validate
