#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace repofix::util {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// relpath -> sha256 of every regular file under root.
std::map<std::string, std::string> hash_tree(const std::filesystem::path& root);

}  // namespace repofix::util
