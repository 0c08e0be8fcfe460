#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace repofix::util {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Recursive copy that skips directories named in `exclude_dirs` (matched on
// the directory basename). Creates `dst`; fails if it already exists.
void copy_tree(const std::filesystem::path& src, const std::filesystem::path& dst,
               const std::vector<std::string>& exclude_dirs = {".git"});

// Relative paths of all regular files under root, sorted, '/'-separated.
std::vector<std::string> list_files(const std::filesystem::path& root);

}  // namespace repofix::util
