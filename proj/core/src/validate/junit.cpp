// Minimal JUnit XML reader: enough for pytest/unittest-style reports
// (<testcase classname name> with failure/error/skipped children). Not a
// general XML parser.

#include <cctype>

#include "repofix/validate/report.hpp"

namespace repofix::validate {

namespace {

std::string decode_entities(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        auto take = [&](std::string_view entity, char replacement) {
            if (s.compare(i, entity.size(), entity) == 0) {
                out += replacement;
                i += entity.size() - 1;
                return true;
            }
            return false;
        };
        if (take("&amp;", '&') || take("&lt;", '<') || take("&gt;", '>') ||
            take("&quot;", '"') || take("&apos;", '\''))
            continue;
        out += s[i];
    }
    return out;
}

// Attributes of the tag whose '<' is at `tag_start`; sets `tag_end` to the
// position just past '>' and reports self-closing tags.
std::map<std::string, std::string> parse_attributes(const std::string& xml,
                                                    std::size_t tag_start, std::size_t& tag_end,
                                                    bool& self_closing) {
    std::map<std::string, std::string> attrs;
    std::size_t i = tag_start;
    while (i < xml.size() && !std::isspace(static_cast<unsigned char>(xml[i])) && xml[i] != '>')
        ++i;
    while (i < xml.size() && xml[i] != '>') {
        while (i < xml.size() && std::isspace(static_cast<unsigned char>(xml[i]))) ++i;
        if (i >= xml.size() || xml[i] == '>' || xml[i] == '/') {
            while (i < xml.size() && xml[i] != '>') ++i;
            break;
        }
        std::size_t name_start = i;
        while (i < xml.size() && xml[i] != '=' && xml[i] != '>' &&
               !std::isspace(static_cast<unsigned char>(xml[i])))
            ++i;
        std::string name = xml.substr(name_start, i - name_start);
        while (i < xml.size() && (std::isspace(static_cast<unsigned char>(xml[i])) || xml[i] == '='))
            ++i;
        if (i < xml.size() && (xml[i] == '"' || xml[i] == '\'')) {
            char quote = xml[i++];
            std::size_t value_start = i;
            while (i < xml.size() && xml[i] != quote) ++i;
            attrs[name] = decode_entities(xml.substr(value_start, i - value_start));
            if (i < xml.size()) ++i;
        }
    }
    self_closing = i >= 2 && xml[i - 1] == '/';
    // '<tag/>' has '/' right before '>'
    if (i < xml.size() && xml[i] == '>') self_closing = xml[i - 1] == '/';
    tag_end = i < xml.size() ? i + 1 : i;
    return attrs;
}

}  // namespace

TestReport parse_junit_xml(const std::string& xml) {
    TestReport report;
    std::size_t pos = 0;
    while ((pos = xml.find("<testcase", pos)) != std::string::npos) {
        std::size_t tag_end = pos;
        bool self_closing = false;
        auto attrs = parse_attributes(xml, pos, tag_end, self_closing);
        std::string classname = attrs.count("classname") ? attrs["classname"] : "";
        std::string name = attrs.count("name") ? attrs["name"] : "";
        std::string id = classname.empty() ? name : classname + "::" + name;
        if (id.empty()) {
            pos = tag_end;
            continue;
        }

        TestOutcome outcome = TestOutcome::Pass;
        std::string message;
        if (!self_closing) {
            std::size_t close = xml.find("</testcase>", tag_end);
            std::string body = xml.substr(tag_end, close == std::string::npos ? std::string::npos
                                                                              : close - tag_end);
            auto child = [&](const char* tag) { return body.find(tag) != std::string::npos; };
            if (child("<failure"))
                outcome = TestOutcome::Fail;
            else if (child("<error"))
                outcome = TestOutcome::Error;
            else if (child("<skipped"))
                outcome = TestOutcome::Skip;
            if (outcome == TestOutcome::Fail || outcome == TestOutcome::Error) {
                std::size_t child_pos = body.find(outcome == TestOutcome::Fail ? "<failure"
                                                                               : "<error");
                std::size_t child_end = child_pos;
                bool child_self_closing = false;
                auto child_attrs =
                    parse_attributes(body, child_pos, child_end, child_self_closing);
                if (child_attrs.count("message"))
                    message = child_attrs["message"];
                else if (!child_self_closing) {
                    std::size_t text_end = body.find("</", child_end);
                    if (text_end != std::string::npos)
                        message = decode_entities(body.substr(child_end, text_end - child_end));
                }
            }
            pos = close == std::string::npos ? xml.size() : close + 11;
        } else {
            pos = tag_end;
        }
        report.outcomes[id] = outcome;
        if (!message.empty()) report.messages[id] = message;
    }
    return report;
}

}  // namespace repofix::validate
