#include "repofix/localize/localizer.hpp"

#include <algorithm>
#include <stdexcept>

#include "repofix/edit/span.hpp"
#include "repofix/llm/prompts.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/strings.hpp"

namespace repofix::localize {

using llm::JsonShape;
using llm::Role;

std::string build_query_generation_prompt(const ProblemStatement& problem, int n) {
    return llm::render_role(Role::QueryGeneration,
                            {{"n", std::to_string(n)}, {"problem", problem.text}});
}

std::string build_file_locator_prompt(const ProblemStatement& problem,
                                      const std::string& rendered_map, int m) {
    return llm::render_role(Role::FileLocator, {{"m", std::to_string(m)},
                                                {"problem", problem.text},
                                                {"repo_map", rendered_map}});
}

std::string build_preassimilator_prompt(const ProblemStatement& problem,
                                        const std::string& schematic_map, int l_max) {
    return llm::render_role(Role::Preassimilator, {{"l_max", std::to_string(l_max)},
                                                   {"problem", problem.text},
                                                   {"schematic_map", schematic_map}});
}

std::string build_coder_parser_prompt(const ProblemStatement& problem, const std::string& file,
                                      const std::string& content) {
    return llm::render_role(Role::CoderParser, {{"problem", problem.text},
                                                {"file_path", file},
                                                {"file_content", content}});
}

Localizer::Localizer(llm::Gateway& gateway, LocalizerConfig config)
    : gateway_(gateway), config_(config) {}

QuerySet Localizer::generate_queries(const ProblemStatement& problem, int n) {
    if (util::trim(problem.text).empty())
        throw std::invalid_argument("problem statement text must be non-empty");
    if (n < 1) throw std::invalid_argument("query count must be at least 1");

    llm::CompletionRequest request;
    request.role = Role::QueryGeneration;
    request.prompt = build_query_generation_prompt(problem, n);
    request.max_tokens = config_.max_tokens;
    auto parsed = gateway_.complete_with_retry(request, JsonShape::StringList,
                                               config_.retry_budget);

    QuerySet set;
    auto push_unique = [&](const std::string& q) {
        std::string trimmed = util::trim(q);
        if (trimmed.empty()) return;
        if (std::find(set.queries.begin(), set.queries.end(), trimmed) != set.queries.end())
            return;
        set.queries.push_back(std::move(trimmed));
    };
    for (const auto& q : parsed.value) {
        if (static_cast<int>(set.queries.size()) >= n) break;
        push_unique(q.get<std::string>());
    }
    if (static_cast<int>(set.queries.size()) < n) push_unique(problem.text);
    if (set.queries.empty()) set.queries.push_back(util::trim(problem.text));
    return set;
}

std::vector<ScoredFile> Localizer::retrieve_candidate_files(const QuerySet& queries,
                                                            const vector::VectorIndex& index,
                                                            vector::Embedder& embedder,
                                                            int per_query_k) {
    if (index.size() == 0) throw Error("retrieval requires a non-empty index");
    std::map<std::string, double> best;
    for (const auto& query : queries.queries) {
        auto results = index.search(embedder.embed(query), static_cast<std::size_t>(per_query_k));
        for (const auto& r : results) {
            auto [it, inserted] = best.emplace(r.entry->doc.file_name, r.score);
            if (!inserted) it->second = std::max(it->second, r.score);
        }
    }
    std::vector<ScoredFile> files;
    files.reserve(best.size());
    for (const auto& [path, score] : best) files.push_back({path, score});
    std::sort(files.begin(), files.end(), [](const ScoredFile& a, const ScoredFile& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.path < b.path;
    });
    return files;
}

std::vector<std::string> Localizer::locate_files_from_map(const ProblemStatement& problem,
                                                          const indexer::RepoFileMap& map, int m,
                                                          std::vector<std::string>& warnings,
                                                          bool* map_truncated) {
    if (map.empty()) throw Error("file locator requires a non-empty repository map");
    bool truncated = false;
    const std::string rendered =
        indexer::render_repo_map_budgeted(map, config_.repo_map_char_budget, &truncated);
    if (map_truncated) *map_truncated = truncated;
    if (truncated)
        warnings.push_back("repository map exceeded the prompt budget; deepest directories "
                           "were omitted for the file locator");

    llm::CompletionRequest request;
    request.role = Role::FileLocator;
    request.prompt = build_file_locator_prompt(problem, rendered, m);
    request.max_tokens = config_.max_tokens;

    nlohmann::json listed;
    try {
        listed = gateway_
                     .complete_with_retry(request, JsonShape::StringList, config_.retry_budget)
                     .value;
    } catch (const llm::StructuredOutputError& e) {
        warnings.push_back(std::string("file locator output unusable, proceeding on retrieval "
                                       "alone: ") +
                           e.what());
        return {};
    }

    std::vector<std::string> files;
    for (const auto& entry : listed) {
        if (static_cast<int>(files.size()) >= m) break;
        std::string path = entry.get<std::string>();
        if (util::starts_with(path, "./")) path = path.substr(2);
        if (!map.contains(path)) {
            warnings.push_back("file locator named a path not in the repository map: " + path);
            continue;
        }
        if (std::find(files.begin(), files.end(), path) == files.end())
            files.push_back(std::move(path));
    }
    return files;
}

CandidateFileSet Localizer::union_candidates(const std::vector<ScoredFile>& rag,
                                             const std::vector<std::string>& map_based,
                                             std::size_t cap) {
    if (rag.empty() && map_based.empty())
        throw LocalizationError("no candidate files: retrieval and the file locator both "
                                "returned nothing");
    CandidateFileSet set;
    for (const auto& f : rag) {
        CandidateFile candidate;
        candidate.path = f.path;
        candidate.score = f.score;
        candidate.provenance.insert(Provenance::Rag);
        set.ranked_files.push_back(std::move(candidate));
    }
    for (const auto& path : map_based) {
        auto it = std::find_if(set.ranked_files.begin(), set.ranked_files.end(),
                               [&](const CandidateFile& c) { return c.path == path; });
        if (it != set.ranked_files.end()) {
            it->provenance.insert(Provenance::FileMap);
        } else {
            CandidateFile candidate;
            candidate.path = path;
            candidate.provenance.insert(Provenance::FileMap);
            set.ranked_files.push_back(std::move(candidate));
        }
    }
    if (set.ranked_files.size() > cap) set.ranked_files.resize(cap);
    return set;
}

FileSelection Localizer::preassimilate(const ProblemStatement& problem,
                                       const CandidateFileSet& candidates,
                                       const std::vector<indexer::FileSchematic>& schematics,
                                       int l_max, std::vector<std::string>& warnings) {
    if (candidates.ranked_files.empty())
        throw LocalizationError("preassimilation requires a non-empty candidate set");
    if (l_max < 1) throw std::invalid_argument("l_max must be at least 1");

    auto fallback = [&]() {
        FileSelection selection;
        selection.files.push_back(candidates.ranked_files.front().path);
        selection.rationale = "fallback";
        return selection;
    };

    llm::CompletionRequest request;
    request.role = Role::Preassimilator;
    request.prompt =
        build_preassimilator_prompt(problem, indexer::render_schematic_map(schematics), l_max);
    request.max_tokens = config_.max_tokens;

    nlohmann::json parsed;
    try {
        parsed = gateway_
                     .complete_with_retry(request, JsonShape::FileSelection, config_.retry_budget)
                     .value;
    } catch (const llm::StructuredOutputError& e) {
        warnings.push_back(std::string("preassimilation output unusable, falling back to the "
                                       "top candidate: ") +
                           e.what());
        return fallback();
    }

    FileSelection selection;
    selection.rationale = parsed.value("rationale", std::string{});
    for (const auto& entry : parsed.at("files")) {
        if (static_cast<int>(selection.files.size()) >= l_max) break;
        std::string path = entry.get<std::string>();
        if (util::starts_with(path, "./")) path = path.substr(2);
        if (!candidates.contains(path)) {
            warnings.push_back("preassimilation selected a non-candidate file, dropped: " + path);
            continue;
        }
        if (std::find(selection.files.begin(), selection.files.end(), path) ==
            selection.files.end())
            selection.files.push_back(std::move(path));
    }
    if (selection.files.empty()) {
        warnings.push_back("preassimilation selected no valid candidate; using the top "
                           "retrieval candidate");
        return fallback();
    }
    return selection;
}

Result<std::vector<PlanElement>> Localizer::parse_locations(const ProblemStatement& problem,
                                                            const std::string& file,
                                                            const std::string& content,
                                                            std::vector<std::string>& warnings) {
    llm::CompletionRequest request;
    request.role = Role::CoderParser;
    request.prompt = build_coder_parser_prompt(problem, file, content);
    request.max_tokens = config_.max_tokens;

    auto to_elements = [&](const nlohmann::json& list, std::string* first_error)
        -> std::vector<PlanElement> {
        std::vector<PlanElement> elements;
        for (const auto& item : list) {
            PlanElement element;
            element.location.level =
                location_level_from_string(item.at("level").get<std::string>())
                    .value_or(LocationLevel::Method);
            element.location.name = item.value("name", std::string{});
            element.location.start_line = item.at("start_line").get<int>();
            element.location.end_line = item.value("end_line", 0);
            element.location.file = file;
            element.instruction = item.at("instruction").get<std::string>();
            auto resolved = edit::resolve_span(content, element.location);
            if (!resolved.ok()) {
                if (first_error && first_error->empty()) *first_error = resolved.error;
                warnings.push_back("invalid location in " + file + ": " + resolved.error);
                continue;
            }
            elements.push_back(std::move(element));
        }
        return elements;
    };

    nlohmann::json list;
    try {
        list = gateway_
                   .complete_with_retry(request, JsonShape::LocationList, config_.retry_budget)
                   .value;
    } catch (const llm::StructuredOutputError& e) {
        return Result<std::vector<PlanElement>>::failure(e.what());
    }

    std::string validation_error;
    auto elements = to_elements(list, &validation_error);
    if (static_cast<std::size_t>(list.size()) == elements.size())
        return Result<std::vector<PlanElement>>::success(std::move(elements));

    // one retry carrying the location validation error
    llm::CompletionRequest retry = request;
    retry.prompt += llm::retry_section(validation_error);
    try {
        list = gateway_.complete_with_retry(retry, JsonShape::LocationList, config_.retry_budget)
                   .value;
    } catch (const llm::StructuredOutputError& e) {
        if (!elements.empty())
            return Result<std::vector<PlanElement>>::success(std::move(elements));
        return Result<std::vector<PlanElement>>::failure(e.what());
    }
    auto retried = to_elements(list, nullptr);
    if (!retried.empty()) return Result<std::vector<PlanElement>>::success(std::move(retried));
    if (!elements.empty()) return Result<std::vector<PlanElement>>::success(std::move(elements));
    return Result<std::vector<PlanElement>>::failure(
        "every location was invalid after a retry: " + validation_error);
}

Localizer::Outcome Localizer::localize(
    const ProblemStatement& problem, const indexer::RepoFileMap& map,
    const std::map<std::string, indexer::FileSchematic>& schematics,
    const vector::VectorIndex& index, vector::Embedder& embedder) {
    Outcome outcome;
    outcome.queries = generate_queries(problem, config_.n_queries);

    std::vector<ScoredFile> rag;
    if (index.size() > 0) {
        rag = retrieve_candidate_files(outcome.queries, index, embedder, config_.per_query_k);
    } else {
        outcome.warnings.push_back("vector index is empty; relying on the file locator only");
    }
    auto map_based = locate_files_from_map(problem, map, config_.m_map_files, outcome.warnings,
                                           &outcome.map_truncated);
    outcome.candidates =
        union_candidates(rag, map_based, static_cast<std::size_t>(config_.union_cap));

    std::vector<indexer::FileSchematic> candidate_schematics;
    for (const auto& candidate : outcome.candidates.ranked_files) {
        auto it = schematics.find(candidate.path);
        if (it != schematics.end()) candidate_schematics.push_back(it->second);
    }
    outcome.selection = preassimilate(problem, outcome.candidates, candidate_schematics,
                                      config_.l_max, outcome.warnings);

    for (const auto& file : outcome.selection.files) {
        const auto path = std::filesystem::path(problem.repo_root) / file;
        if (!std::filesystem::is_regular_file(path)) {
            outcome.warnings.push_back("selected file missing on disk: " + file);
            continue;
        }
        auto elements = parse_locations(problem, file, util::read_file(path), outcome.warnings);
        if (!elements.ok()) {
            outcome.warnings.push_back("no usable locations in " + file + ": " + elements.error);
            continue;
        }
        for (auto& element : *elements) outcome.plan.elements.push_back(std::move(element));
    }
    if (outcome.plan.empty())
        throw LocalizationError("localization produced no usable edit plan");
    return outcome;
}

}  // namespace repofix::localize
