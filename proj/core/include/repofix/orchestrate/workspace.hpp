#pragma once
// Per-candidate scratch workspaces: full copies of the pristine checkout
// under the run directory. The pristine tree is never written to.

#include <filesystem>
#include <string>
#include <vector>

namespace repofix::orchestrate {

class WorkspaceManager {
public:
    explicit WorkspaceManager(std::filesystem::path root);

    // Copies `pristine` (minus VCS metadata) to <root>/<label>. Fails before
    // any generation spend when disk space is clearly insufficient.
    std::string create_scratch(const std::filesystem::path& pristine, const std::string& label);

    // Idempotent.
    void destroy(const std::string& workspace);

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
};

}  // namespace repofix::orchestrate
