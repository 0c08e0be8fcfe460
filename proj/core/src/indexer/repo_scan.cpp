#include "repofix/indexer/repo_scan.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>

#include "repofix/util/errors.hpp"
#include "repofix/util/glob.hpp"

namespace fs = std::filesystem;

namespace repofix::indexer {

std::size_t RepoFileMap::file_count() const {
    std::size_t n = 0;
    for (const auto& [dir, files] : entries) n += files.size();
    return n;
}

bool RepoFileMap::contains(const std::string& repo_relative_path) const {
    auto slash = repo_relative_path.rfind('/');
    std::string dir = slash == std::string::npos ? "." : repo_relative_path.substr(0, slash);
    std::string file =
        slash == std::string::npos ? repo_relative_path : repo_relative_path.substr(slash + 1);
    auto it = entries.find(dir);
    if (it == entries.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), file);
}

std::vector<std::string> RepoFileMap::all_paths() const {
    std::vector<std::string> paths;
    for (const auto& [dir, files] : entries)
        for (const auto& f : files) paths.push_back(dir == "." ? f : dir + "/" + f);
    std::sort(paths.begin(), paths.end());
    return paths;
}

namespace {

bool dir_excluded(const std::string& name, const std::string& rel_path,
                  const IndexConfig& config) {
    if (std::find(config.excluded_dirs.begin(), config.excluded_dirs.end(), name) !=
        config.excluded_dirs.end())
        return true;
    for (const auto& g : config.exclude_globs) {
        if (util::glob_match(g, name) || util::glob_match(g, rel_path)) return true;
    }
    return false;
}

void scan_dir(const fs::path& abs, const std::string& rel, const IndexConfig& config,
              RepoFileMap& map, std::vector<std::string>& warnings) {
    std::vector<std::string> files;
    std::vector<std::pair<fs::path, std::string>> subdirs;

    std::error_code ec;
    fs::directory_iterator it(abs, ec);
    if (ec) {
        warnings.push_back("skipping unreadable directory " + rel + ": " + ec.message());
        return;
    }
    for (const auto& entry : it) {
        const std::string name = entry.path().filename().string();
        std::error_code type_ec;
        if (entry.is_directory(type_ec)) {
            std::string child_rel = rel == "." ? name : rel + "/" + name;
            if (!dir_excluded(name, child_rel, config))
                subdirs.emplace_back(entry.path(), child_rel);
        } else if (entry.is_regular_file(type_ec)) {
            std::string ext = entry.path().extension().string();
            if (config.extensions.count(ext)) files.push_back(name);
        }
    }
    if (!files.empty()) {
        std::sort(files.begin(), files.end());
        map.entries[rel] = std::move(files);
    }
    std::sort(subdirs.begin(), subdirs.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    for (const auto& [path, child_rel] : subdirs) scan_dir(path, child_rel, config, map, warnings);
}

}  // namespace

ScanResult scan_repository(const std::string& root, const IndexConfig& config) {
    fs::path root_path(root);
    if (!fs::exists(root_path) || !fs::is_directory(root_path))
        throw ConfigError("repository root does not exist or is not a directory: " + root);
    ScanResult result;
    scan_dir(root_path, ".", config, result.map, result.warnings);
    return result;
}

std::string render_repo_map(const RepoFileMap& map) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [dir, files] : map.entries) j[dir] = files;
    return j.dump(2);
}

std::string render_repo_map_budgeted(const RepoFileMap& map, std::size_t max_chars,
                                     bool* truncated) {
    if (truncated) *truncated = false;
    std::string rendered = render_repo_map(map);
    if (rendered.size() <= max_chars) return rendered;

    auto depth_of = [](const std::string& dir) {
        if (dir == ".") return std::size_t{0};
        return static_cast<std::size_t>(std::count(dir.begin(), dir.end(), '/')) + 1;
    };
    std::size_t max_depth = 0;
    for (const auto& [dir, files] : map.entries) max_depth = std::max(max_depth, depth_of(dir));

    RepoFileMap pruned = map;
    while (max_depth > 0 && rendered.size() > max_chars) {
        for (auto it = pruned.entries.begin(); it != pruned.entries.end();) {
            if (depth_of(it->first) >= max_depth)
                it = pruned.entries.erase(it);
            else
                ++it;
        }
        --max_depth;
        rendered = render_repo_map(pruned);
        if (truncated) *truncated = true;
    }
    return rendered;
}

}  // namespace repofix::indexer
