#pragma once
// Candidate solution engine: k temperature-varied generations per edit plan,
// full-suite validation with pass->fail elimination, a single-iteration
// refinement rescue for regressed candidates, and final selection.

#include <functional>
#include <optional>

#include "repofix/edit/splice.hpp"
#include "repofix/llm/gateway.hpp"
#include "repofix/localize/types.hpp"
#include "repofix/validate/report.hpp"
#include "repofix/validate/runner.hpp"

namespace repofix::engine {

struct TemperatureSchedule {
    std::vector<double> temperatures = {0.0, 0.4, 0.8};

    void validate() const;  // throws ConfigError on empty/duplicate/out-of-range
};

enum class CandidateStatus { Generated, SpliceFailed, Regressed, Survived, Refined, Selected };

const char* to_string(CandidateStatus status);

struct CandidateEdit {
    localize::PlanElement element;
    edit::GeneratedCode code;
    int changed_start = 0;
    int changed_end = 0;
};

struct CandidateSolution {
    int id = 0;
    double temperature = 0.0;
    std::vector<CandidateEdit> edits;
    std::string workspace;
    std::string patch;  // unified diff against the pristine checkout
    CandidateStatus status = CandidateStatus::Generated;
    std::string diagnostic;
    validate::RegressionDiff regression;
    validate::TestReport post_report;
    bool refinement_attempted = false;
};

struct SolutionSet {
    std::vector<CandidateSolution> candidates;
    std::optional<int> chosen;
};

struct EngineConfig {
    TemperatureSchedule schedule;
    int retry_budget = 2;  // parse-error retries per generation call
    int max_tokens = 4096;
};

std::string build_code_generation_prompt(const std::string& problem_text,
                                         const localize::PlanElement& element,
                                         const std::string& code_segment);
std::string build_refinement_prompt(const std::string& problem_text,
                                    const localize::PlanElement& element,
                                    const std::string& failed_test_id,
                                    const std::string& failure_output,
                                    const std::string& code_segment);
std::string build_final_selection_prompt(const std::string& problem_text,
                                         const std::string& rendered_candidates);
std::string render_candidates_for_selection(const std::vector<const CandidateSolution*>& survivors,
                                            const validate::TestReport& baseline);

class SolutionEngine {
public:
    // Creates a fresh scratch copy of the pristine checkout per candidate.
    using WorkspaceFactory = std::function<std::string(int candidate_id)>;

    SolutionEngine(llm::Gateway& gateway, EngineConfig config, std::string pristine_root);

    std::vector<CandidateSolution> generate_candidates(const localize::EditPlan& plan,
                                                       const localize::ProblemStatement& problem,
                                                       const WorkspaceFactory& make_workspace);

    void filter_by_validation(std::vector<CandidateSolution>& candidates,
                              const validate::TestReport& baseline,
                              const validate::TestRunnerConfig& runner);

    // One refinement, re-validated once; returns true when the candidate is
    // rescued. A second call on the same candidate is rejected.
    bool refine(CandidateSolution& candidate, const validate::TestReport& baseline,
                const localize::ProblemStatement& problem,
                const validate::TestRunnerConfig& runner);

    // Exactly one survivor is chosen without a completion call; an invalid
    // model choice falls back to the lowest-temperature survivor.
    std::optional<int> select_final(std::vector<CandidateSolution>& candidates,
                                    const localize::ProblemStatement& problem,
                                    const validate::TestReport& baseline);

    // generate -> validate -> (rescue refinement when nothing survived) ->
    // select. Throws NoViableSolutionError when no candidate survives.
    SolutionSet run(const localize::EditPlan& plan, const localize::ProblemStatement& problem,
                    const validate::TestReport& baseline,
                    const validate::TestRunnerConfig& runner,
                    const WorkspaceFactory& make_workspace);

private:
    bool generate_edit(CandidateSolution& candidate, const localize::PlanElement& element,
                       const localize::ProblemStatement& problem, llm::Role role,
                       const std::string& failed_test_id, const std::string& failure_output);
    void compute_patch(CandidateSolution& candidate, const localize::EditPlan& plan);

    llm::Gateway& gateway_;
    EngineConfig config_;
    std::string pristine_root_;
};

}  // namespace repofix::engine
