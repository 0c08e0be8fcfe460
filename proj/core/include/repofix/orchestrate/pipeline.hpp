#pragma once
// Stage orchestration behind the CLI subcommands: index, localize, fix.
// Artifacts land in config.index_dir / config.run_dir; the user's checkout
// is never modified (baseline and candidates run in scratch copies).

#include <map>
#include <memory>

#include "repofix/engine/engine.hpp"
#include "repofix/llm/gateway.hpp"
#include "repofix/localize/localizer.hpp"
#include "repofix/orchestrate/config.hpp"
#include "repofix/orchestrate/workspace.hpp"
#include "repofix/vector/index.hpp"

namespace repofix::orchestrate {

struct IndexArtifacts {
    std::string repo_root;  // recorded at index time
    indexer::RepoFileMap map;
    std::map<std::string, indexer::FileSchematic> schematics;
    std::vector<indexer::EmbeddingDocument> docs;
};

std::unique_ptr<vector::Embedder> make_embedder(const RunConfig& config);
std::shared_ptr<llm::Backend> make_backend(const RunConfig& config);

// Appends one JSON line per completion call to <run_dir>/calls.jsonl.
llm::CallSink make_call_sink(const std::filesystem::path& run_dir);

// Plain text, or a JSON object whose problem_statement field is used (any
// hints field is discarded before the pipeline sees the record).
std::string read_issue_text(const std::string& issue_file);

// Scans, parses and embeds the repository; writes repo_map.json,
// schematics.json, embedding_docs.jsonl, vectors.idx and index_meta.json.
void run_index(const RunConfig& config);

IndexArtifacts load_index_artifacts(const std::string& index_dir);
vector::VectorIndex load_vector_index(const std::string& index_dir);

// Baseline suite run on a scratch copy of the pristine checkout; persisted
// to <run_dir>/baseline.json. Throws PipelineError when truncated.
validate::TestReport record_baseline(const RunConfig& config, const std::string& repo_root,
                                     WorkspaceManager& workspaces);

// Localize-only entry point; writes plan.json into the run dir.
int run_localize(const RunConfig& config);

// Full pipeline: baseline -> localize -> generate -> validate -> (rescue
// refinement) -> select. Returns 0 only when a solution was chosen; a
// report.json naming the failing stage is written even on errors.
int run_fix(const RunConfig& config);

}  // namespace repofix::orchestrate
