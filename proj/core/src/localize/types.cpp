#include "repofix/localize/types.hpp"

#include <algorithm>

namespace repofix::localize {

std::vector<std::string> CandidateFileSet::paths() const {
    std::vector<std::string> out;
    out.reserve(ranked_files.size());
    for (const auto& f : ranked_files) out.push_back(f.path);
    return out;
}

bool CandidateFileSet::contains(const std::string& path) const {
    return std::any_of(ranked_files.begin(), ranked_files.end(),
                       [&](const CandidateFile& f) { return f.path == path; });
}

const char* to_string(LocationLevel level) {
    switch (level) {
        case LocationLevel::TopLevel: return "top_level";
        case LocationLevel::Class: return "class";
        case LocationLevel::Method: return "method";
    }
    return "method";
}

std::optional<LocationLevel> location_level_from_string(std::string_view s) {
    if (s == "top_level") return LocationLevel::TopLevel;
    if (s == "class") return LocationLevel::Class;
    if (s == "method") return LocationLevel::Method;
    return std::nullopt;
}

void to_json(nlohmann::json& j, const CandidateFile& f) {
    std::vector<std::string> provenance;
    if (f.provenance.count(Provenance::Rag)) provenance.push_back("rag");
    if (f.provenance.count(Provenance::FileMap)) provenance.push_back("file_map");
    j = nlohmann::json{{"path", f.path}, {"score", f.score}, {"provenance", provenance}};
}

void to_json(nlohmann::json& j, const CandidateFileSet& s) {
    j = nlohmann::json{{"ranked_files", s.ranked_files}};
}

void to_json(nlohmann::json& j, const FileSelection& s) {
    j = nlohmann::json{{"files", s.files}, {"rationale", s.rationale}};
}

void to_json(nlohmann::json& j, const RelevantLocation& l) {
    j = nlohmann::json{{"level", to_string(l.level)},
                       {"name", l.name},
                       {"start_line", l.start_line},
                       {"end_line", l.end_line},
                       {"file", l.file}};
}

void from_json(const nlohmann::json& j, RelevantLocation& l) {
    l.level = location_level_from_string(j.at("level").get<std::string>())
                  .value_or(LocationLevel::Method);
    l.name = j.value("name", std::string{});
    l.start_line = j.at("start_line").get<int>();
    l.end_line = j.value("end_line", 0);
    l.file = j.value("file", std::string{});
}

void to_json(nlohmann::json& j, const PlanElement& e) {
    j = nlohmann::json{{"location", e.location}, {"instruction", e.instruction}};
}

void from_json(const nlohmann::json& j, PlanElement& e) {
    e.location = j.at("location").get<RelevantLocation>();
    e.instruction = j.at("instruction").get<std::string>();
}

void to_json(nlohmann::json& j, const EditPlan& p) {
    j = nlohmann::json{{"elements", p.elements}};
}

void from_json(const nlohmann::json& j, EditPlan& p) {
    p.elements = j.at("elements").get<std::vector<PlanElement>>();
}

}  // namespace repofix::localize
