#pragma once
// Repository file map: directory path -> sorted source filenames. The key
// for files directly under the root is ".".

#include <map>
#include <set>
#include <string>
#include <vector>

namespace repofix::indexer {

struct IndexConfig {
    std::set<std::string> extensions = {".py"};
    std::vector<std::string> excluded_dirs = {".git",         "__pycache__", "venv",
                                              ".venv",        "build",       "dist",
                                              "node_modules"};
    std::vector<std::string> exclude_globs;  // matched against relative dir paths
};

struct RepoFileMap {
    std::map<std::string, std::vector<std::string>> entries;

    bool empty() const { return entries.empty(); }
    std::size_t file_count() const;
    bool contains(const std::string& repo_relative_path) const;
    std::vector<std::string> all_paths() const;  // dir/file joined, sorted
};

struct ScanResult {
    RepoFileMap map;
    std::vector<std::string> warnings;
};

// Recursive scan of `root`; excluded directories are pruned whole. Throws
// ConfigError when root is missing; unreadable subdirectories are recorded
// as warnings and skipped.
ScanResult scan_repository(const std::string& root, const IndexConfig& config = {});

// Byte-stable serialization (sorted keys, two-space indent).
std::string render_repo_map(const RepoFileMap& map);

// Depth-limited variant for prompt budgets: deepest directories are dropped
// until the rendering fits; `truncated` reports whether anything was cut.
std::string render_repo_map_budgeted(const RepoFileMap& map, std::size_t max_chars,
                                     bool* truncated);

}  // namespace repofix::indexer
