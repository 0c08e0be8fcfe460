#include "repofix/orchestrate/workspace.hpp"

#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"

namespace fs = std::filesystem;

namespace repofix::orchestrate {

WorkspaceManager::WorkspaceManager(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

static std::uintmax_t tree_size(const fs::path& root) {
    std::uintmax_t total = 0;
    std::error_code ec;
    for (auto it = fs::recursive_directory_iterator(root, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        if (it->is_regular_file(ec)) total += it->file_size(ec);
    }
    return total;
}

std::string WorkspaceManager::create_scratch(const fs::path& pristine, const std::string& label) {
    if (!fs::is_directory(pristine))
        throw Error("pristine checkout is not a directory: " + pristine.string());

    const auto needed = tree_size(pristine);
    std::error_code ec;
    const auto space = fs::space(root_, ec);
    if (!ec && space.available < needed + (16u << 20))
        throw Error("insufficient disk space for a scratch workspace (need ~" +
                    std::to_string(needed >> 20) + " MiB)");

    const fs::path target = root_ / label;
    if (fs::exists(target)) fs::remove_all(target);
    util::copy_tree(pristine, target, {".git"});
    return target.string();
}

void WorkspaceManager::destroy(const std::string& workspace) {
    std::error_code ec;
    fs::remove_all(workspace, ec);
}

}  // namespace repofix::orchestrate
