#pragma once
// Blocking subprocess execution with output capture and a hard timeout.
// POSIX only; the whole process group is killed on expiry.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace repofix::util {

struct SubprocessResult {
    int exit_code = -1;
    bool timed_out = false;
    bool spawn_failed = false;  // command not found / exec error
    std::string spawn_error;
    std::string stdout_text;
    std::string stderr_text;
};

SubprocessResult run_command(const std::vector<std::string>& argv,
                             const std::filesystem::path& cwd,
                             const std::map<std::string, std::string>& extra_env,
                             double timeout_seconds);

}  // namespace repofix::util
