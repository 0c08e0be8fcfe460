#include "repofix/engine/engine.hpp"

#include <algorithm>
#include <set>

#include "repofix/edit/diff.hpp"
#include "repofix/indexer/python_parser.hpp"
#include "repofix/llm/prompts.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/strings.hpp"

namespace repofix::engine {

using llm::JsonShape;
using llm::Role;

void TemperatureSchedule::validate() const {
    if (temperatures.empty()) throw ConfigError("temperature schedule must not be empty");
    std::set<double> seen;
    for (double t : temperatures) {
        if (t < 0.0 || t > 2.0)
            throw ConfigError("temperature " + std::to_string(t) + " outside [0, 2]");
        if (!seen.insert(t).second)
            throw ConfigError("temperature schedule values must be distinct");
    }
}

const char* to_string(CandidateStatus status) {
    switch (status) {
        case CandidateStatus::Generated: return "generated";
        case CandidateStatus::SpliceFailed: return "splice_failed";
        case CandidateStatus::Regressed: return "regressed";
        case CandidateStatus::Survived: return "survived";
        case CandidateStatus::Refined: return "refined";
        case CandidateStatus::Selected: return "selected";
    }
    return "generated";
}

std::string build_code_generation_prompt(const std::string& problem_text,
                                         const localize::PlanElement& element,
                                         const std::string& code_segment) {
    const auto& location = element.location;
    const std::string target_name =
        location.name.empty() ? "lines " + std::to_string(location.start_line) + "-" +
                                    std::to_string(location.end_line)
                              : location.name;
    return llm::render_role(Role::CodeGeneration, {{"level", to_string(location.level)},
                                                   {"problem", problem_text},
                                                   {"instruction", element.instruction},
                                                   {"file_path", location.file},
                                                   {"target_name", target_name},
                                                   {"code_segment", code_segment}});
}

std::string build_refinement_prompt(const std::string& problem_text,
                                    const localize::PlanElement& element,
                                    const std::string& failed_test_id,
                                    const std::string& failure_output,
                                    const std::string& code_segment) {
    const auto& location = element.location;
    const std::string target_name =
        location.name.empty() ? "lines " + std::to_string(location.start_line) + "-" +
                                    std::to_string(location.end_line)
                              : location.name;
    return llm::render_role(Role::Refinement, {{"problem", problem_text},
                                               {"instruction", element.instruction},
                                               {"failed_test_id", failed_test_id},
                                               {"failure_output", failure_output},
                                               {"file_path", location.file},
                                               {"target_name", target_name},
                                               {"code_segment", code_segment}});
}

std::string build_final_selection_prompt(const std::string& problem_text,
                                         const std::string& rendered_candidates) {
    return llm::render_role(Role::FinalSelection,
                            {{"problem", problem_text}, {"candidates", rendered_candidates}});
}

std::string render_candidates_for_selection(const std::vector<const CandidateSolution*>& survivors,
                                            const validate::TestReport& baseline) {
    std::string out;
    const std::size_t baseline_failures =
        baseline.count(validate::TestOutcome::Fail) + baseline.count(validate::TestOutcome::Error);
    for (const auto* candidate : survivors) {
        out += "### candidate " + std::to_string(candidate->id) +
               " (temperature " + std::to_string(candidate->temperature) + ")\n";
        out += "tests passing: " + std::to_string(candidate->post_report.count(
                                       validate::TestOutcome::Pass)) +
               ", failing: " +
               std::to_string(candidate->post_report.count(validate::TestOutcome::Fail) +
                              candidate->post_report.count(validate::TestOutcome::Error)) +
               " (baseline had " + std::to_string(baseline_failures) + " failing)\n";
        if (!candidate->regression.new_passes.empty())
            out += "baseline failures fixed: " +
                   util::join({candidate->regression.new_passes.begin(),
                               candidate->regression.new_passes.end()},
                              ", ") +
                   "\n";
        out += "```diff\n" + candidate->patch + "```\n\n";
    }
    return out;
}

SolutionEngine::SolutionEngine(llm::Gateway& gateway, EngineConfig config,
                               std::string pristine_root)
    : gateway_(gateway), config_(std::move(config)), pristine_root_(std::move(pristine_root)) {
    config_.schedule.validate();
}

// Re-resolution tolerant to the candidate's own earlier edits: when the
// stated start line no longer matches but the name is unique in the file,
// snap to the unique match.
static Result<edit::EditTarget> resolve_in_workspace(const std::string& content,
                                                     const localize::RelevantLocation& location) {
    auto target = edit::resolve_span(content, location);
    if (target.ok() || location.level == localize::LocationLevel::TopLevel) return target;
    auto schematic = indexer::parse_file(location.file, content);
    const indexer::CodeUnit* unique = nullptr;
    for (const auto& unit : schematic.units) {
        const bool kind_ok = location.level == localize::LocationLevel::Class
                                 ? unit.kind == indexer::UnitKind::Class
                                 : unit.kind != indexer::UnitKind::Class;
        if (!kind_ok) continue;
        if (unit.qualified_name != location.name && unit.name != location.name) continue;
        if (unique) return target;  // ambiguous, keep the original failure
        unique = &unit;
    }
    if (!unique) return target;
    localize::RelevantLocation snapped = location;
    snapped.start_line = unique->start_line;
    return edit::resolve_span(content, snapped);
}

bool SolutionEngine::generate_edit(CandidateSolution& candidate,
                                   const localize::PlanElement& element,
                                   const localize::ProblemStatement& problem, Role role,
                                   const std::string& failed_test_id,
                                   const std::string& failure_output) {
    const auto file_path = std::filesystem::path(candidate.workspace) / element.location.file;
    if (!std::filesystem::is_regular_file(file_path)) {
        candidate.diagnostic = "file missing in workspace: " + element.location.file;
        return false;
    }
    const std::string content = util::read_file(file_path);
    auto target = resolve_in_workspace(content, element.location);
    if (!target.ok()) {
        candidate.diagnostic = target.error;
        return false;
    }
    const std::string segment =
        util::dedent(edit::extract_span(content, target->span_start, target->span_end));

    llm::CompletionRequest request;
    request.role = role;
    request.temperature = role == Role::Refinement ? 0.0 : candidate.temperature;
    request.max_tokens = config_.max_tokens;
    request.prompt =
        role == Role::Refinement
            ? build_refinement_prompt(problem.text, element, failed_test_id, failure_output,
                                      segment)
            : build_code_generation_prompt(problem.text, element, segment);

    // Dry-run splice as the validator so parser diagnostics ride the retry.
    auto validator = [&](const nlohmann::json& value) -> std::string {
        edit::GeneratedCode code{value.at("code").get<std::string>(), request.temperature, 1};
        auto outcome = edit::splice(content, *target, code);
        if (!outcome.ok()) return outcome.error;
        if (!outcome->syntax_ok)
            return "the file does not parse after inserting the replacement (" +
                   outcome->diagnostic + ")";
        return {};
    };

    llm::ParsedCompletion parsed;
    try {
        parsed = gateway_.complete_with_retry(request, JsonShape::CodeObject,
                                              config_.retry_budget, validator);
    } catch (const llm::StructuredOutputError& e) {
        candidate.diagnostic = e.what();
        return false;
    }

    edit::GeneratedCode code{parsed.value.at("code").get<std::string>(), request.temperature,
                             parsed.attempts};
    auto applied = edit::apply_plan_element(candidate.workspace, element, code);
    if (!applied.ok()) {
        candidate.diagnostic = applied.error;
        return false;
    }
    CandidateEdit edit;
    edit.element = element;
    edit.code = std::move(code);
    edit.changed_start = (*applied).changed_start;
    edit.changed_end = (*applied).changed_end;
    candidate.edits.push_back(std::move(edit));
    return true;
}

void SolutionEngine::compute_patch(CandidateSolution& candidate, const localize::EditPlan& plan) {
    std::set<std::string> files;
    for (const auto& element : plan.elements) files.insert(element.location.file);
    std::string patch;
    for (const auto& file : files) {
        const auto pristine = std::filesystem::path(pristine_root_) / file;
        const auto edited = std::filesystem::path(candidate.workspace) / file;
        if (!std::filesystem::exists(pristine) || !std::filesystem::exists(edited)) continue;
        patch += edit::make_unified_diff(util::read_file(pristine), util::read_file(edited), file);
    }
    candidate.patch = std::move(patch);
}

std::vector<CandidateSolution> SolutionEngine::generate_candidates(
    const localize::EditPlan& plan, const localize::ProblemStatement& problem,
    const WorkspaceFactory& make_workspace) {
    if (plan.empty()) throw Error("cannot generate candidates from an empty edit plan");

    std::vector<CandidateSolution> candidates;
    for (std::size_t i = 0; i < config_.schedule.temperatures.size(); ++i) {
        CandidateSolution candidate;
        candidate.id = static_cast<int>(i);
        candidate.temperature = config_.schedule.temperatures[i];
        candidate.workspace = make_workspace(candidate.id);
        candidate.status = CandidateStatus::Generated;
        for (const auto& element : plan.elements) {
            if (!generate_edit(candidate, element, problem, Role::CodeGeneration, {}, {})) {
                candidate.status = CandidateStatus::SpliceFailed;
                break;
            }
        }
        if (candidate.status == CandidateStatus::Generated) compute_patch(candidate, plan);
        candidates.push_back(std::move(candidate));
    }

    const bool any_usable =
        std::any_of(candidates.begin(), candidates.end(), [](const CandidateSolution& c) {
            return c.status == CandidateStatus::Generated;
        });
    if (!any_usable) {
        std::string diagnostics;
        for (const auto& c : candidates)
            diagnostics += "candidate " + std::to_string(c.id) + ": " + c.diagnostic + "; ";
        throw NoViableSolutionError("every candidate failed to generate: " + diagnostics);
    }
    return candidates;
}

void SolutionEngine::filter_by_validation(std::vector<CandidateSolution>& candidates,
                                          const validate::TestReport& baseline,
                                          const validate::TestRunnerConfig& runner) {
    for (auto& candidate : candidates) {
        if (candidate.status != CandidateStatus::Generated) continue;
        auto report = validate::run_suite(candidate.workspace, runner);
        candidate.post_report = report;
        if (report.truncated) {
            candidate.status = CandidateStatus::Regressed;
            candidate.diagnostic = "validation run unusable: " + report.diagnostic;
            continue;
        }
        candidate.regression = validate::diff_reports(baseline, report);
        if (validate::is_regression(candidate.regression, baseline)) {
            candidate.status = CandidateStatus::Regressed;
        } else {
            candidate.status = CandidateStatus::Survived;
        }
    }
}

bool SolutionEngine::refine(CandidateSolution& candidate, const validate::TestReport& baseline,
                            const localize::ProblemStatement& problem,
                            const validate::TestRunnerConfig& runner) {
    if (candidate.status != CandidateStatus::Regressed || candidate.refinement_attempted)
        return false;
    candidate.refinement_attempted = true;

    std::string failed_test_id, failure_output;
    if (!candidate.regression.new_failures.empty()) {
        failed_test_id = *candidate.regression.new_failures.begin();
        auto it = candidate.post_report.messages.find(failed_test_id);
        failure_output = it != candidate.post_report.messages.end()
                             ? it->second
                             : "test now fails (no captured output)";
    } else {
        // vanished baseline pass (broken collection) or truncated run
        for (const auto& id : candidate.regression.vanished) {
            auto it = baseline.outcomes.find(id);
            if (it != baseline.outcomes.end() && it->second == validate::TestOutcome::Pass) {
                failed_test_id = id;
                failure_output = "test vanished from the report after the patch";
                break;
            }
        }
        if (failed_test_id.empty()) {
            failed_test_id = "(unknown)";
            failure_output = candidate.diagnostic.empty() ? "validation run unusable"
                                                          : candidate.diagnostic;
        }
    }

    const auto original_edits = candidate.edits;
    candidate.edits.clear();
    for (const auto& edit : original_edits) {
        if (!generate_edit(candidate, edit.element, problem, Role::Refinement, failed_test_id,
                           failure_output))
            return false;
    }

    auto report = validate::run_suite(candidate.workspace, runner);
    candidate.post_report = report;
    if (report.truncated) {
        candidate.diagnostic = "re-validation unusable: " + report.diagnostic;
        return false;
    }
    candidate.regression = validate::diff_reports(baseline, report);
    if (validate::is_regression(candidate.regression, baseline)) return false;
    candidate.status = CandidateStatus::Refined;
    return true;
}

std::optional<int> SolutionEngine::select_final(std::vector<CandidateSolution>& candidates,
                                                const localize::ProblemStatement& problem,
                                                const validate::TestReport& baseline) {
    std::vector<CandidateSolution*> survivors;
    for (auto& candidate : candidates) {
        if (candidate.status == CandidateStatus::Survived ||
            candidate.status == CandidateStatus::Refined)
            survivors.push_back(&candidate);
    }
    if (survivors.empty()) return std::nullopt;
    if (survivors.size() == 1) {
        survivors.front()->status = CandidateStatus::Selected;
        return survivors.front()->id;
    }

    auto lowest_temperature = [&]() {
        return (*std::min_element(survivors.begin(), survivors.end(),
                                  [](const CandidateSolution* a, const CandidateSolution* b) {
                                      return a->temperature < b->temperature;
                                  }))
            ->id;
    };

    std::vector<const CandidateSolution*> view(survivors.begin(), survivors.end());
    llm::CompletionRequest request;
    request.role = Role::FinalSelection;
    request.prompt = build_final_selection_prompt(
        problem.text, render_candidates_for_selection(view, baseline));
    request.max_tokens = config_.max_tokens;

    int chosen;
    try {
        auto parsed =
            gateway_.complete_with_retry(request, JsonShape::Choice, config_.retry_budget);
        chosen = parsed.value.at("choice").get<int>();
    } catch (const llm::StructuredOutputError&) {
        chosen = lowest_temperature();
    }
    const bool valid = std::any_of(survivors.begin(), survivors.end(),
                                   [&](const CandidateSolution* c) { return c->id == chosen; });
    if (!valid) chosen = lowest_temperature();
    for (auto* candidate : survivors)
        if (candidate->id == chosen) candidate->status = CandidateStatus::Selected;
    return chosen;
}

SolutionSet SolutionEngine::run(const localize::EditPlan& plan,
                                const localize::ProblemStatement& problem,
                                const validate::TestReport& baseline,
                                const validate::TestRunnerConfig& runner,
                                const WorkspaceFactory& make_workspace) {
    SolutionSet set;
    set.candidates = generate_candidates(plan, problem, make_workspace);
    filter_by_validation(set.candidates, baseline, runner);

    const bool any_survived =
        std::any_of(set.candidates.begin(), set.candidates.end(), [](const CandidateSolution& c) {
            return c.status == CandidateStatus::Survived;
        });
    if (!any_survived) {
        // rescue path: one refinement per regressed candidate
        for (auto& candidate : set.candidates) {
            if (candidate.status == CandidateStatus::Regressed)
                if (refine(candidate, baseline, problem, runner))
                    compute_patch(candidate, plan);
        }
    }

    set.chosen = select_final(set.candidates, problem, baseline);
    return set;
}

}  // namespace repofix::engine
