#pragma once
// Three-stage hierarchical search-space reduction: candidate files via
// retrieval + repository file map, refinement via the schematic map, then
// relevant-location extraction into an edit plan. Each stage is one
// self-contained completion with full context.

#include <map>

#include "repofix/indexer/repo_scan.hpp"
#include "repofix/indexer/schematic_map.hpp"
#include "repofix/llm/gateway.hpp"
#include "repofix/localize/types.hpp"
#include "repofix/util/result.hpp"
#include "repofix/vector/index.hpp"

namespace repofix::localize {

struct LocalizerConfig {
    int n_queries = 4;
    int m_map_files = 5;
    int per_query_k = 5;
    int union_cap = 5;
    int l_max = 2;
    int retry_budget = 2;
    int max_tokens = 1024;
    std::size_t repo_map_char_budget = 120000;
};

struct ScoredFile {
    std::string path;
    double score = 0.0;
};

// Prompt builders are exposed so scenario tests can script replay
// transcripts against the exact prompts the pipeline issues.
std::string build_query_generation_prompt(const ProblemStatement& problem, int n);
std::string build_file_locator_prompt(const ProblemStatement& problem,
                                      const std::string& rendered_map, int m);
std::string build_preassimilator_prompt(const ProblemStatement& problem,
                                        const std::string& schematic_map, int l_max);
std::string build_coder_parser_prompt(const ProblemStatement& problem, const std::string& file,
                                      const std::string& content);

class Localizer {
public:
    Localizer(llm::Gateway& gateway, LocalizerConfig config);

    // One QueryGeneration completion; short responses are padded with the
    // raw problem text, then deduplicated.
    QuerySet generate_queries(const ProblemStatement& problem, int n);

    // Per-file score = max over all query hits; ordered by score descending,
    // ties by path.
    static std::vector<ScoredFile> retrieve_candidate_files(const QuerySet& queries,
                                                            const vector::VectorIndex& index,
                                                            vector::Embedder& embedder,
                                                            int per_query_k);

    // FileLocator over the serialized repo map; hallucinated paths are
    // dropped with a warning, an unparseable completion degrades to an
    // empty list.
    std::vector<std::string> locate_files_from_map(const ProblemStatement& problem,
                                                   const indexer::RepoFileMap& map, int m,
                                                   std::vector<std::string>& warnings,
                                                   bool* map_truncated = nullptr);

    // Retrieval-ranked files first, then map-based additions, capped.
    static CandidateFileSet union_candidates(const std::vector<ScoredFile>& rag,
                                             const std::vector<std::string>& map_based,
                                             std::size_t cap);

    FileSelection preassimilate(const ProblemStatement& problem,
                                const CandidateFileSet& candidates,
                                const std::vector<indexer::FileSchematic>& candidate_schematics,
                                int l_max, std::vector<std::string>& warnings);

    // One CoderParser completion for one selected file; invalid locations
    // get one retry carrying the validation error, then are dropped.
    Result<std::vector<PlanElement>> parse_locations(const ProblemStatement& problem,
                                                     const std::string& file,
                                                     const std::string& content,
                                                     std::vector<std::string>& warnings);

    struct Outcome {
        QuerySet queries;
        CandidateFileSet candidates;
        FileSelection selection;
        EditPlan plan;
        std::vector<std::string> warnings;
        bool map_truncated = false;
    };

    // Full stage run over loaded index artifacts. Reads selected file
    // content from problem.repo_root. Throws LocalizationError when no
    // usable candidates or plan elements remain.
    Outcome localize(const ProblemStatement& problem, const indexer::RepoFileMap& map,
                     const std::map<std::string, indexer::FileSchematic>& schematics,
                     const vector::VectorIndex& index, vector::Embedder& embedder);

private:
    llm::Gateway& gateway_;
    LocalizerConfig config_;
};

}  // namespace repofix::localize
