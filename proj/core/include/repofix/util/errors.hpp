#pragma once
// Error hierarchy shared across the pipeline. Exit codes are assigned by the
// CLI from the dynamic type of the escaping exception.

#include <stdexcept>
#include <string>

namespace repofix {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration: missing files, malformed config, unknown runner command.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Completion or embedding backend failed after retries.
class BackendError : public Error {
public:
    using Error::Error;
};

// Replay backend had no entry for a request fingerprint.
class ReplayMissError : public BackendError {
public:
    explicit ReplayMissError(const std::string& fingerprint)
        : BackendError("replay miss: no transcript entry for fingerprint " + fingerprint),
          fingerprint_(fingerprint) {}
    const std::string& fingerprint() const { return fingerprint_; }

private:
    std::string fingerprint_;
};

// Localization produced no usable candidate files or edit plan.
class LocalizationError : public Error {
public:
    using Error::Error;
};

// Every candidate was eliminated; no solution to choose from.
class NoViableSolutionError : public Error {
public:
    using Error::Error;
};

// A pipeline stage failed hard; carries the stage tag for diagnostics.
class PipelineError : public Error {
public:
    PipelineError(const std::string& stage, const std::string& message)
        : Error("[" + stage + "] " + message), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace repofix
