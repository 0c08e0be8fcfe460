#include "repofix/edit/splice.hpp"

#include <filesystem>

#include "repofix/indexer/python_parser.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/strings.hpp"

namespace repofix::edit {

std::string reindent(const std::string& code, const std::string& indent) {
    if (indent.empty()) return code;
    bool ends_nl = false;
    auto lines = util::split_lines(code, &ends_nl);
    for (auto& line : lines) {
        if (!util::is_blank(line)) line = indent + line;
    }
    return util::join_lines(lines, ends_nl);
}

Result<SpliceResult> splice(const std::string& content, const EditTarget& target,
                            const GeneratedCode& replacement) {
    std::string diagnostic;
    if (!indexer::parses_clean(replacement.text, &diagnostic))
        return Result<SpliceResult>::failure(
            "replacement code does not parse at module scope (" + diagnostic +
            "); emit the complete region dedented to column 0");

    bool ends_nl = false;
    auto lines = util::split_lines(content, &ends_nl);
    const int line_count = static_cast<int>(lines.size());
    if (target.span_start < 1 || target.span_end > line_count ||
        target.span_start > target.span_end)
        return Result<SpliceResult>::failure("resolved span (" +
                                             std::to_string(target.span_start) + ", " +
                                             std::to_string(target.span_end) +
                                             ") is outside the file bounds");

    // Normalize: drop trailing blank lines of the replacement; the suffix
    // owns inter-definition spacing.
    std::string body = reindent(replacement.text, target.indent);
    auto body_lines = util::split_lines(body, nullptr);
    while (!body_lines.empty() && util::is_blank(body_lines.back())) body_lines.pop_back();
    if (body_lines.empty())
        return Result<SpliceResult>::failure("replacement code is empty after normalization");

    std::vector<std::string> out_lines;
    out_lines.reserve(lines.size() + body_lines.size());
    for (int i = 1; i < target.span_start; ++i)
        out_lines.push_back(std::move(lines[static_cast<std::size_t>(i - 1)]));
    for (auto& line : body_lines) out_lines.push_back(std::move(line));
    for (int i = target.span_end + 1; i <= line_count; ++i)
        out_lines.push_back(std::move(lines[static_cast<std::size_t>(i - 1)]));

    SpliceResult result;
    result.new_content = util::join_lines(out_lines, ends_nl);
    result.changed_start = target.span_start;
    result.changed_end = target.span_start + static_cast<int>(body_lines.size()) - 1;
    result.syntax_ok = indexer::parses_clean(result.new_content, &result.diagnostic);
    if (result.syntax_ok) result.diagnostic.clear();
    return Result<SpliceResult>::success(std::move(result));
}

Result<SpliceResult> apply_plan_element(const std::string& workspace_root,
                                        const localize::PlanElement& element,
                                        const GeneratedCode& code) {
    const auto file_path = std::filesystem::path(workspace_root) / element.location.file;
    if (!std::filesystem::is_regular_file(file_path))
        return Result<SpliceResult>::failure("file does not exist in workspace: " +
                                             element.location.file);
    const std::string content = util::read_file(file_path);

    auto target = resolve_span(content, element.location);
    if (!target.ok()) return Result<SpliceResult>::failure(target.error);

    auto result = splice(content, *target, code);
    if (!result.ok()) return result;
    if (!result->syntax_ok)
        return Result<SpliceResult>::failure(
            "file does not parse after splicing the replacement (" + result->diagnostic + ")");

    util::write_file(file_path, result->new_content);
    return result;
}

}  // namespace repofix::edit
