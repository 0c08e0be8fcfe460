#include "repofix/util/fs.hpp"

#include <algorithm>
#include <fstream>

#include "repofix/util/errors.hpp"

namespace fs = std::filesystem;

namespace repofix::util {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for reading: " + path.string());
    std::string out;
    in.seekg(0, std::ios::end);
    auto n = in.tellg();
    if (n > 0) {
        out.resize(static_cast<std::size_t>(n));
        in.seekg(0, std::ios::beg);
        in.read(out.data(), n);
    }
    if (in.bad()) throw Error("read failed: " + path.string());
    return out;
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path.string());
}

static void copy_tree_rec(const fs::path& src, const fs::path& dst,
                          const std::vector<std::string>& exclude_dirs) {
    fs::create_directories(dst);
    for (const auto& entry : fs::directory_iterator(src)) {
        const auto name = entry.path().filename().string();
        if (entry.is_directory()) {
            if (std::find(exclude_dirs.begin(), exclude_dirs.end(), name) != exclude_dirs.end())
                continue;
            copy_tree_rec(entry.path(), dst / name, exclude_dirs);
        } else if (entry.is_regular_file()) {
            fs::copy_file(entry.path(), dst / name);
        }
        // sockets, fifos etc. are skipped
    }
}

void copy_tree(const fs::path& src, const fs::path& dst,
               const std::vector<std::string>& exclude_dirs) {
    if (!fs::is_directory(src)) throw Error("copy_tree: source is not a directory: " + src.string());
    if (fs::exists(dst)) throw Error("copy_tree: destination already exists: " + dst.string());
    copy_tree_rec(src, dst, exclude_dirs);
}

std::vector<std::string> list_files(const fs::path& root) {
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        files.push_back(fs::relative(entry.path(), root).generic_string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace repofix::util
