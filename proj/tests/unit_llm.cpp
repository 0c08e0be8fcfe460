#include "doctest.h"

#include <atomic>

#include "repofix/llm/gateway.hpp"
#include "repofix/llm/prompts.hpp"
#include "repofix/llm/structured.hpp"
#include "test_util.hpp"

using namespace repofix;
using namespace repofix::llm;

namespace {

// In-memory backend that serves a scripted sequence of responses.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}
    CompletionResponse complete(const CompletionRequest& request) override {
        last_prompts.push_back(request.prompt);
        if (cursor_ >= responses_.size()) throw BackendError("script exhausted");
        CompletionResponse out;
        out.text = responses_[cursor_++];
        out.usage = {10, 5};
        out.backend_id = "scripted";
        return out;
    }
    std::string id() const override { return "scripted"; }
    std::vector<std::string> last_prompts;

private:
    std::vector<std::string> responses_;
    std::size_t cursor_ = 0;
};

class PoisonTransport : public HttpTransport {
public:
    HttpResult post(const std::string&, const std::map<std::string, std::string>&,
                    const std::string&, int) override {
        ++uses;
        HttpResult res;
        res.error = "poisoned transport used";
        return res;
    }
    std::atomic<int> uses{0};
};

}  // namespace

TEST_CASE("extract_first_json tolerates fences and surrounding prose") {
    auto v = extract_first_json("Here you go:\n```json\n[\"q1\", \"q2\"]\n```\nthanks");
    REQUIRE(v.has_value());
    CHECK((*v)[0] == "q1");

    CHECK_FALSE(extract_first_json("no json here at all").has_value());

    // a brace blob that is not JSON is skipped in favor of the later value
    auto second = extract_first_json("try {x} first, then {\"a\": 1}");
    REQUIRE(second.has_value());
    CHECK((*second)["a"] == 1);

    auto nested = extract_first_json(R"({"outer": {"inner": [1, 2, {"k": "v"}]}} trailing)");
    REQUIRE(nested.has_value());
    CHECK((*nested)["outer"]["inner"][2]["k"] == "v");

    auto with_escapes = extract_first_json(R"(["quote \" and ] bracket", "b"])");
    REQUIRE(with_escapes.has_value());
    CHECK(with_escapes->size() == 2);
}

TEST_CASE("parse_structured validates role shapes with diagnostics") {
    auto ok = parse_structured("```json\n[\"q1\",\"q2\"]\n```", JsonShape::StringList);
    REQUIRE(ok.ok());

    auto prose = parse_structured("I could not find anything relevant.", JsonShape::StringList);
    CHECK_FALSE(prose.ok());
    CHECK(prose.error.find("no JSON value") != std::string::npos);

    auto mismatch = parse_structured(R"({"files": ["a.py"]})", JsonShape::StringList);
    CHECK_FALSE(mismatch.ok());
    CHECK(mismatch.error.find("array of strings") != std::string::npos);

    auto selection = parse_structured(R"({"files": ["a.py"], "rationale": "fits"})",
                                      JsonShape::FileSelection);
    CHECK(selection.ok());

    auto locations = parse_structured(
        R"([{"level": "method", "name": "A.f", "start_line": 12, "instruction": "fix"}])",
        JsonShape::LocationList);
    CHECK(locations.ok());

    auto bad_level = parse_structured(
        R"([{"level": "line", "name": "f", "start_line": 2, "instruction": "x"}])",
        JsonShape::LocationList);
    CHECK_FALSE(bad_level.ok());
    CHECK(bad_level.error.find("top_level, class, method") != std::string::npos);

    auto no_end = parse_structured(
        R"([{"level": "top_level", "start_line": 1, "instruction": "x"}])",
        JsonShape::LocationList);
    CHECK_FALSE(no_end.ok());

    CHECK(parse_structured(R"({"code": "def f():\n    pass"})", JsonShape::CodeObject).ok());
    CHECK(parse_structured(R"({"choice": 2})", JsonShape::Choice).ok());
    CHECK_FALSE(parse_structured(R"({"choice": "two"})", JsonShape::Choice).ok());
}

TEST_CASE("template rendering substitutes placeholders and rejects unknowns") {
    CHECK(render_template("Hello {{name}}!", {{"name", "world"}}) == "Hello world!");
    CHECK(render_template("json: {\"k\": 1} and {{x}}", {{"x", "v"}}) ==
          "json: {\"k\": 1} and v");
    CHECK_THROWS_AS(static_cast<void>(render_template("{{missing}}", {})), ConfigError);
    // values are not re-scanned
    CHECK(render_template("{{a}}", {{"a", "{{b}}"}}) == "{{b}}");

    for (Role role : {Role::QueryGeneration, Role::FileLocator, Role::Preassimilator,
                      Role::CoderParser, Role::CodeGeneration, Role::Refinement,
                      Role::FinalSelection})
        CHECK_FALSE(template_text(role).empty());
}

TEST_CASE("fingerprints differ by role, prompt and temperature") {
    const std::string prompt = "find the bug";
    auto base = fingerprint(Role::QueryGeneration, prompt, 0.0);
    CHECK(base == fingerprint(Role::QueryGeneration, prompt, 0.0));
    CHECK(base != fingerprint(Role::FileLocator, prompt, 0.0));
    CHECK(base != fingerprint(Role::QueryGeneration, prompt + " ", 0.0));
    CHECK(base != fingerprint(Role::QueryGeneration, prompt, 0.4));
}

TEST_CASE("replay backend serves exact fingerprints and errors on a miss") {
    testutil::TempDir tmp("replay");
    testutil::TranscriptBuilder builder;
    builder.add(Role::QueryGeneration, "prompt-A", 0.0, "[\"q\"]");
    builder.add(Role::QueryGeneration, "prompt-A", 0.0, "[\"second\"]");
    const auto path = builder.write(tmp / "transcript.jsonl");

    ReplayBackend backend(path);
    CompletionRequest request;
    request.role = Role::QueryGeneration;
    request.prompt = "prompt-A";
    request.temperature = 0.0;
    CHECK(backend.complete(request).text == "[\"q\"]");
    CHECK(backend.complete(request).text == "[\"second\"]");  // FIFO on duplicates
    CHECK_THROWS_AS(static_cast<void>(backend.complete(request)), ReplayMissError);

    CompletionRequest other = request;
    other.temperature = 0.7;
    try {
        backend.complete(other);
        FAIL("expected a replay miss");
    } catch (const ReplayMissError& e) {
        CHECK(std::string(e.what()).find(fingerprint(Role::QueryGeneration, "prompt-A", 0.7)) !=
              std::string::npos);
    }
}

TEST_CASE("record backend appends one transcript entry per call") {
    testutil::TempDir tmp("record");
    const auto path = tmp / "transcript.jsonl";
    auto backend = std::make_unique<RecordBackend>(
        std::make_unique<ScriptedBackend>(std::vector<std::string>{"r1", "r2"}), path);

    CompletionRequest request;
    request.role = Role::CoderParser;
    request.prompt = "p";
    backend->complete(request);
    backend->complete(request);

    ReplayBackend replay(path);
    CHECK(replay.remaining() == 2);
    CHECK(replay.complete(request).text == "r1");
    CHECK(replay.complete(request).text == "r2");
}

TEST_CASE("live backend surfaces transport failures as BackendError") {
    auto poison = std::make_shared<PoisonTransport>();
    LiveBackendConfig config;
    config.base_url = "http://localhost:1";
    config.max_retries = 1;
    config.retry_backoff_ms = 0;
    LiveBackend backend(config, poison);
    CompletionRequest request;
    request.prompt = "p";
    CHECK_THROWS_AS(static_cast<void>(backend.complete(request)), BackendError);
    CHECK(poison->uses == 2);  // initial + one retry
}

TEST_CASE("gateway retry appends the diagnostic section and bounds attempts") {
    auto scripted = std::make_shared<ScriptedBackend>(
        std::vector<std::string>{"not json", "still prose", "[\"ok\"]"});
    Gateway gateway(scripted);

    CompletionRequest request;
    request.role = Role::QueryGeneration;
    request.prompt = "base prompt";

    auto parsed = gateway.complete_with_retry(request, JsonShape::StringList, 2);
    CHECK(parsed.attempts == 3);
    CHECK(parsed.value[0] == "ok");

    REQUIRE(scripted->last_prompts.size() == 3);
    CHECK(scripted->last_prompts[0] == "base prompt");
    CHECK(scripted->last_prompts[1].find("previous attempt failed because:") !=
          std::string::npos);
    // prompt growth is monotone: attempt 3 contains attempt 2's text
    CHECK(scripted->last_prompts[2].find(scripted->last_prompts[1]) == 0);
    CHECK(scripted->last_prompts[2].size() > scripted->last_prompts[1].size());
}

TEST_CASE("gateway: budget 0 with malformed output fails immediately") {
    auto scripted =
        std::make_shared<ScriptedBackend>(std::vector<std::string>{"junk", "[\"never\"]"});
    Gateway gateway(scripted);
    CompletionRequest request;
    request.role = Role::QueryGeneration;
    request.prompt = "p";
    CHECK_THROWS_AS(
        static_cast<void>(gateway.complete_with_retry(request, JsonShape::StringList, 0)),
        StructuredOutputError);
    CHECK(scripted->last_prompts.size() == 1);
}

TEST_CASE("gateway: first valid response consumes exactly one call") {
    auto scripted = std::make_shared<ScriptedBackend>(std::vector<std::string>{"[\"one\"]"});
    Gateway gateway(scripted);
    CompletionRequest request;
    request.role = Role::QueryGeneration;
    request.prompt = "p";
    auto parsed = gateway.complete_with_retry(request, JsonShape::StringList, 3);
    CHECK(parsed.attempts == 1);
    CHECK(scripted->last_prompts.size() == 1);
    CHECK(gateway.calls_for_role(Role::QueryGeneration) == 1);
    CHECK(gateway.total_usage().prompt_tokens == 10);
}

TEST_CASE("gateway validator rejections ride the same retry loop") {
    auto scripted = std::make_shared<ScriptedBackend>(
        std::vector<std::string>{R"({"code": "bad"})", R"({"code": "good"})"});
    Gateway gateway(scripted);
    CompletionRequest request;
    request.role = Role::CodeGeneration;
    request.prompt = "p";
    auto validator = [](const nlohmann::json& v) -> std::string {
        return v.at("code") == "good" ? "" : "code rejected by validator";
    };
    auto parsed = gateway.complete_with_retry(request, JsonShape::CodeObject, 2, validator);
    CHECK(parsed.attempts == 2);
    CHECK(scripted->last_prompts[1].find("code rejected by validator") != std::string::npos);
}

TEST_CASE("transport factory override is honored and clearable") {
    auto poison = std::make_shared<PoisonTransport>();
    set_transport_factory_for_testing([poison](const std::string&) { return poison; });
    auto transport = make_transport("http://example.invalid");
    CHECK(transport.get() == poison.get());
    set_transport_factory_for_testing(nullptr);
    CHECK(make_transport("http://example.invalid").get() != poison.get());
}
