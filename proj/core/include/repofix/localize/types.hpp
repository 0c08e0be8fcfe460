#pragma once
// Localization stage outputs: candidate files, the narrowed selection, and
// the ordered edit plan of relevant locations.

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace repofix::localize {

struct ProblemStatement {
    std::string text;
    std::string repo_root;
};

struct QuerySet {
    std::vector<std::string> queries;

    std::size_t n() const { return queries.size(); }
};

enum class Provenance { Rag, FileMap };

struct CandidateFile {
    std::string path;
    double score = 0.0;  // max retrieval score; 0 for map-only files
    std::set<Provenance> provenance;
};

struct CandidateFileSet {
    std::vector<CandidateFile> ranked_files;

    std::vector<std::string> paths() const;
    bool contains(const std::string& path) const;
};

struct FileSelection {
    std::vector<std::string> files;  // 1..l_max paths, subset of candidates
    std::string rationale;
};

enum class LocationLevel { TopLevel, Class, Method };

const char* to_string(LocationLevel level);
std::optional<LocationLevel> location_level_from_string(std::string_view s);

struct RelevantLocation {
    LocationLevel level = LocationLevel::Method;
    std::string name;  // qualified for methods; empty for top_level
    int start_line = 0;
    int end_line = 0;  // meaningful for top_level; derived otherwise
    std::string file;
};

struct PlanElement {
    RelevantLocation location;
    std::string instruction;
};

struct EditPlan {
    std::vector<PlanElement> elements;

    bool empty() const { return elements.empty(); }
};

void to_json(nlohmann::json& j, const CandidateFile& f);
void to_json(nlohmann::json& j, const CandidateFileSet& s);
void to_json(nlohmann::json& j, const FileSelection& s);
void to_json(nlohmann::json& j, const RelevantLocation& l);
void from_json(const nlohmann::json& j, RelevantLocation& l);
void to_json(nlohmann::json& j, const PlanElement& e);
void from_json(const nlohmann::json& j, PlanElement& e);
void to_json(nlohmann::json& j, const EditPlan& p);
void from_json(const nlohmann::json& j, EditPlan& p);

}  // namespace repofix::localize
