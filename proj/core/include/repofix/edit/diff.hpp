#pragma once
// Unified diff generation (Myers) and application. Paths are repo-relative
// with the conventional a/ and b/ prefixes; /dev/null marks file creation
// or deletion.

#include <filesystem>
#include <string>
#include <vector>

namespace repofix::edit {

// Empty string when old_text == new_text.
std::string make_unified_diff(const std::string& old_text, const std::string& new_text,
                              const std::string& path, int context = 3);

struct FilePatch {
    std::string old_path;  // empty for created files
    std::string new_path;  // empty for deleted files
    std::string text;      // this file's section of the diff
};

std::vector<FilePatch> split_patch(const std::string& diff_text);

// Applies a (possibly multi-file) unified diff to files under `root`.
// Hunks must apply exactly at their stated positions. Throws Error with a
// diagnostic on any mismatch.
void apply_unified_diff(const std::filesystem::path& root, const std::string& diff_text);

}  // namespace repofix::edit
