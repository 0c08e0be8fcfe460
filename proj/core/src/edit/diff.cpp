#include "repofix/edit/diff.hpp"

#include <algorithm>
#include <cstdio>

#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/strings.hpp"

namespace repofix::edit {

namespace {

enum class Op { Keep, Delete, Insert };

struct Edit {
    Op op;
    int index;  // into old lines (Keep/Delete) or new lines (Insert)
};

// Myers greedy O(ND) over the middle section after common prefix/suffix
// stripping. Beyond the D cap the middle is emitted as delete-all/insert-all,
// which is still a valid (just not minimal) diff.
std::vector<Edit> myers_diff(const std::vector<std::string>& a, const std::vector<std::string>& b,
                             int offset_a, int offset_b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int max_d = std::min(n + m, 4000);
    const int v_size = 2 * max_d + 1;
    std::vector<std::vector<int>> trace;
    std::vector<int> v(static_cast<std::size_t>(v_size), 0);

    auto at = [&](std::vector<int>& vec, int k) -> int& {
        return vec[static_cast<std::size_t>(k + max_d)];
    };

    int found_d = -1;
    for (int d = 0; d <= max_d; ++d) {
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && at(v, k - 1) < at(v, k + 1)))
                x = at(v, k + 1);
            else
                x = at(v, k - 1) + 1;
            int y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            at(v, k) = x;
            if (x >= n && y >= m) {
                found_d = d;
                break;
            }
        }
        trace.push_back(v);
        if (found_d >= 0) break;
    }

    std::vector<Edit> edits;
    if (found_d < 0) {
        // cap exceeded: degenerate replace
        for (int i = 0; i < n; ++i) edits.push_back({Op::Delete, offset_a + i});
        for (int j = 0; j < m; ++j) edits.push_back({Op::Insert, offset_b + j});
        return edits;
    }

    // backtrack
    int x = n, y = m;
    for (int d = found_d; d > 0; --d) {
        auto& prev = trace[static_cast<std::size_t>(d - 1)];
        const int k = x - y;
        int prev_k;
        if (k == -d || (k != d && prev[static_cast<std::size_t>(k - 1 + max_d)] <
                                      prev[static_cast<std::size_t>(k + 1 + max_d)]))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        int prev_x = prev[static_cast<std::size_t>(prev_k + max_d)];
        int prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            edits.push_back({Op::Keep, offset_a + --x});
            --y;
        }
        if (x == prev_x)
            edits.push_back({Op::Insert, offset_b + --y});
        else
            edits.push_back({Op::Delete, offset_a + --x});
    }
    while (x > 0 && y > 0) {
        edits.push_back({Op::Keep, offset_a + --x});
        --y;
    }
    while (x > 0) edits.push_back({Op::Delete, offset_a + --x});
    while (y > 0) edits.push_back({Op::Insert, offset_b + --y});
    std::reverse(edits.begin(), edits.end());
    return edits;
}

std::vector<Edit> line_diff(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
           a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
        ++suffix;

    std::vector<Edit> edits;
    for (std::size_t i = 0; i < prefix; ++i) edits.push_back({Op::Keep, static_cast<int>(i)});
    std::vector<std::string> mid_a(a.begin() + static_cast<std::ptrdiff_t>(prefix),
                                   a.end() - static_cast<std::ptrdiff_t>(suffix));
    std::vector<std::string> mid_b(b.begin() + static_cast<std::ptrdiff_t>(prefix),
                                   b.end() - static_cast<std::ptrdiff_t>(suffix));
    auto mid = myers_diff(mid_a, mid_b, static_cast<int>(prefix), static_cast<int>(prefix));
    edits.insert(edits.end(), mid.begin(), mid.end());
    for (std::size_t i = a.size() - suffix; i < a.size(); ++i)
        edits.push_back({Op::Keep, static_cast<int>(i)});
    return edits;
}

struct HunkLine {
    char tag;  // ' ', '-', '+'
    std::string text;
    bool missing_newline = false;
};

}  // namespace

std::string make_unified_diff(const std::string& old_text, const std::string& new_text,
                              const std::string& path, int context) {
    if (old_text == new_text) return {};
    bool old_nl = false, new_nl = false;
    auto a = util::split_lines(old_text, &old_nl);
    auto b = util::split_lines(new_text, &new_nl);
    if (old_text.empty()) old_nl = true;  // no "\ No newline" marker for empty files
    if (new_text.empty()) new_nl = true;

    auto edits = line_diff(a, b);

    // materialize tagged lines with positions
    std::vector<HunkLine> tagged;
    tagged.reserve(edits.size());
    for (const auto& e : edits) {
        if (e.op == Op::Keep)
            tagged.push_back({' ', a[static_cast<std::size_t>(e.index)], false});
        else if (e.op == Op::Delete)
            tagged.push_back({'-', a[static_cast<std::size_t>(e.index)],
                              !old_nl && e.index == static_cast<int>(a.size()) - 1});
        else
            tagged.push_back({'+', b[static_cast<std::size_t>(e.index)],
                              !new_nl && e.index == static_cast<int>(b.size()) - 1});
    }
    // a kept final line without newline also needs the marker
    if (!tagged.empty() && tagged.back().tag == ' ' && (!old_nl || !new_nl))
        tagged.back().missing_newline = true;

    std::string out = "--- a/" + path + "\n+++ b/" + path + "\n";

    std::size_t i = 0;
    int old_line = 1, new_line = 1;
    while (i < tagged.size()) {
        // skip unchanged runs
        if (tagged[i].tag == ' ') {
            std::size_t run = i;
            while (run < tagged.size() && tagged[run].tag == ' ') ++run;
            if (run == tagged.size()) break;
            std::size_t keep = std::min<std::size_t>(context, run - i);
            old_line += static_cast<int>(run - i - keep);
            new_line += static_cast<int>(run - i - keep);
            i = run - keep;
        }
        // hunk: from i, include trailing context and bridge short gaps
        std::size_t j = i;
        std::size_t last_change = i;
        while (j < tagged.size()) {
            if (tagged[j].tag != ' ') {
                last_change = j;
                ++j;
                continue;
            }
            std::size_t gap = j;
            while (gap < tagged.size() && tagged[gap].tag == ' ') ++gap;
            if (gap == tagged.size() || gap - j > static_cast<std::size_t>(2 * context)) break;
            j = gap;
        }
        std::size_t hunk_end = std::min(tagged.size(), last_change + 1 + static_cast<std::size_t>(context));

        int hunk_old_start = old_line, hunk_new_start = new_line;
        int old_count = 0, new_count = 0;
        std::string body;
        for (std::size_t k = i; k < hunk_end; ++k) {
            const auto& line = tagged[k];
            body += line.tag;
            body += line.text;
            body += '\n';
            if (line.missing_newline) body += "\\ No newline at end of file\n";
            if (line.tag != '+') ++old_count;
            if (line.tag != '-') ++new_count;
        }
        old_line += old_count;
        new_line += new_count;

        out += "@@ -" + std::to_string(old_count == 0 ? hunk_old_start - 1 : hunk_old_start) + "," +
               std::to_string(old_count) + " +" +
               std::to_string(new_count == 0 ? hunk_new_start - 1 : hunk_new_start) + "," +
               std::to_string(new_count) + " @@\n";
        out += body;
        i = hunk_end;
    }
    return out;
}

std::vector<FilePatch> split_patch(const std::string& diff_text) {
    std::vector<FilePatch> patches;
    auto lines = util::split_lines(diff_text, nullptr);

    auto strip_prefix = [](std::string path) -> std::string {
        if (path == "/dev/null") return {};
        if (util::starts_with(path, "a/") || util::starts_with(path, "b/")) return path.substr(2);
        return path;
    };

    std::size_t i = 0;
    while (i < lines.size()) {
        if (!util::starts_with(lines[i], "--- ")) {
            ++i;
            continue;
        }
        if (i + 1 >= lines.size() || !util::starts_with(lines[i + 1], "+++ ")) {
            ++i;
            continue;
        }
        FilePatch patch;
        // paths may carry "\tdate" suffixes
        auto old_raw = lines[i].substr(4);
        auto new_raw = lines[i + 1].substr(4);
        patch.old_path = strip_prefix(old_raw.substr(0, old_raw.find('\t')));
        patch.new_path = strip_prefix(new_raw.substr(0, new_raw.find('\t')));
        std::size_t j = i + 2;
        while (j < lines.size() && !util::starts_with(lines[j], "--- ") &&
               !util::starts_with(lines[j], "diff "))
            ++j;
        std::vector<std::string> section(lines.begin() + static_cast<std::ptrdiff_t>(i),
                                         lines.begin() + static_cast<std::ptrdiff_t>(j));
        patch.text = util::join_lines(section, true);
        patches.push_back(std::move(patch));
        i = j;
    }
    return patches;
}

namespace {

struct Hunk {
    int old_start = 0, old_count = 0;
    int new_start = 0, new_count = 0;
    std::vector<HunkLine> lines;
};

std::vector<Hunk> parse_hunks(const std::vector<std::string>& lines) {
    std::vector<Hunk> hunks;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (!util::starts_with(lines[i], "@@")) {
            ++i;
            continue;
        }
        Hunk hunk;
        if (std::sscanf(lines[i].c_str(), "@@ -%d,%d +%d,%d @@", &hunk.old_start, &hunk.old_count,
                        &hunk.new_start, &hunk.new_count) != 4) {
            int os = 0, ns = 0;
            if (std::sscanf(lines[i].c_str(), "@@ -%d +%d @@", &os, &ns) == 2) {
                hunk.old_start = os;
                hunk.old_count = 1;
                hunk.new_start = ns;
                hunk.new_count = 1;
            } else {
                throw Error("malformed hunk header: " + lines[i]);
            }
        }
        ++i;
        while (i < lines.size() &&
               (lines[i].empty() || lines[i][0] == ' ' || lines[i][0] == '-' ||
                lines[i][0] == '+' || lines[i][0] == '\\')) {
            if (util::starts_with(lines[i], "\\ No newline")) {
                if (!hunk.lines.empty()) hunk.lines.back().missing_newline = true;
            } else if (lines[i].empty()) {
                // tolerated: an empty context line with the leading space eaten
                hunk.lines.push_back({' ', "", false});
            } else {
                hunk.lines.push_back({lines[i][0], lines[i].substr(1), false});
            }
            ++i;
        }
        hunks.push_back(std::move(hunk));
    }
    return hunks;
}

}  // namespace

void apply_unified_diff(const std::filesystem::path& root, const std::string& diff_text) {
    for (const auto& file_patch : split_patch(diff_text)) {
        const bool creating = file_patch.old_path.empty();
        const bool deleting = file_patch.new_path.empty();
        const std::string rel = creating ? file_patch.new_path : file_patch.old_path;
        if (rel.empty()) throw Error("patch section has no usable path");
        const auto target = root / rel;

        std::string original;
        if (!creating) {
            if (!std::filesystem::is_regular_file(target))
                throw Error("patch target does not exist: " + rel);
            original = util::read_file(target);
        }
        if (deleting) {
            std::filesystem::remove(target);
            continue;
        }

        bool ends_nl = false;
        auto old_lines = util::split_lines(original, &ends_nl);
        auto section_lines = util::split_lines(file_patch.text, nullptr);
        auto hunks = parse_hunks(section_lines);

        std::vector<std::string> out_lines;
        bool out_ends_nl = true;
        std::size_t cursor = 0;  // index into old_lines
        for (const auto& hunk : hunks) {
            const std::size_t hunk_old =
                hunk.old_count == 0 ? static_cast<std::size_t>(hunk.old_start)
                                    : static_cast<std::size_t>(hunk.old_start - 1);
            if (hunk_old < cursor || hunk_old > old_lines.size())
                throw Error("hunk position out of range in " + rel);
            for (std::size_t k = cursor; k < hunk_old; ++k) out_lines.push_back(old_lines[k]);
            cursor = hunk_old;
            for (const auto& line : hunk.lines) {
                if (line.tag == ' ' || line.tag == '-') {
                    if (cursor >= old_lines.size() || old_lines[cursor] != line.text)
                        throw Error("hunk does not apply cleanly to " + rel + " at line " +
                                    std::to_string(cursor + 1));
                    if (line.tag == ' ') out_lines.push_back(old_lines[cursor]);
                    ++cursor;
                } else {
                    out_lines.push_back(line.text);
                }
                if (line.missing_newline && line.tag != '-') out_ends_nl = false;
            }
        }
        for (std::size_t k = cursor; k < old_lines.size(); ++k) out_lines.push_back(old_lines[k]);
        if (!hunks.empty() && cursor == old_lines.size() && !ends_nl && !original.empty()) {
            // original lacked a trailing newline and the tail was kept
            bool tail_kept = true;
            if (!hunks.empty()) {
                const auto& last = hunks.back();
                tail_kept = static_cast<std::size_t>(last.old_start - 1 + last.old_count) <
                            old_lines.size();
            }
            if (tail_kept) out_ends_nl = false;
        }
        util::write_file(target, util::join_lines(out_lines, out_ends_nl && !out_lines.empty()));
    }
}

}  // namespace repofix::edit
