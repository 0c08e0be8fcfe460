#include "doctest.h"

#include <nlohmann/json.hpp>

#include <set>

#include "repofix/indexer/embedding_doc.hpp"
#include "repofix/indexer/python_parser.hpp"
#include "repofix/indexer/repo_scan.hpp"
#include "repofix/indexer/schematic_map.hpp"
#include "repofix/util/errors.hpp"
#include "repofix/util/fs.hpp"
#include "repofix/util/strings.hpp"
#include "test_util.hpp"

using namespace repofix;
using indexer::UnitKind;

namespace {

std::vector<indexer::FileSchematic> parse_corpus() {
    std::vector<indexer::FileSchematic> schematics;
    const auto corpus = testutil::fixture("corpus");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus))
        if (entry.path().extension() == ".py") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files)
        schematics.push_back(
            indexer::parse_file(path.filename().string(), util::read_file(path)));
    return schematics;
}

}  // namespace

TEST_CASE("parse_file extracts class, method, args and returns") {
    const std::string src =
        "class A:\n"
        "    def f(self, x): return x\n";
    auto schematic = indexer::parse_file("a.py", src);
    REQUIRE(schematic.parse_ok);
    REQUIRE(schematic.units.size() == 2);
    CHECK(schematic.units[0].kind == UnitKind::Class);
    CHECK(schematic.units[0].name == "A");
    const auto& method = schematic.units[1];
    CHECK(method.kind == UnitKind::Method);
    CHECK(method.qualified_name == "A.f");
    CHECK(method.arg_names() == std::vector<std::string>{"self", "x"});
    CHECK(method.return_statements == std::vector<std::string>{"x"});
    CHECK(method.signature == "def f(self, x):");
    CHECK(method.parent_class == "A");
}

TEST_CASE("parse_file on an empty file yields zero units, parse_ok") {
    auto schematic = indexer::parse_file("empty.py", "");
    CHECK(schematic.parse_ok);
    CHECK(schematic.units.empty());
}

TEST_CASE("parse_file reports truncated source as a parse failure") {
    auto schematic = indexer::parse_file("bad.py", "def f(\n");
    CHECK_FALSE(schematic.parse_ok);
    CHECK(schematic.units.empty());
    REQUIRE(schematic.parse_error.has_value());
    CHECK(schematic.parse_error->find("syntax error") != std::string::npos);
}

TEST_CASE("decorated definitions start their span at the first decorator") {
    const std::string src =
        "@deco\n"
        "@other(1)\n"
        "def f():\n"
        "    pass\n";
    auto schematic = indexer::parse_file("d.py", src);
    REQUIRE(schematic.units.size() == 1);
    CHECK(schematic.units[0].start_line == 1);
    CHECK(schematic.units[0].end_line == 4);
    CHECK(schematic.units[0].decorators ==
          std::vector<std::string>{"@deco", "@other(1)"});
}

TEST_CASE("nested functions and nested classes fold into the enclosing unit") {
    const std::string src =
        "def outer():\n"
        "    def inner():\n"
        "        return 1\n"
        "    class Hidden:\n"
        "        def m(self):\n"
        "            return 2\n"
        "    return inner\n";
    auto schematic = indexer::parse_file("nested.py", src);
    REQUIRE(schematic.units.size() == 1);
    CHECK(schematic.units[0].name == "outer");
    CHECK(schematic.units[0].end_line == 7);
    // only outer's own return statements count
    CHECK(schematic.units[0].return_statements == std::vector<std::string>{"inner"});
}

TEST_CASE("corpus: unit names match the reference parse for every file") {
    auto reference = nlohmann::json::parse(
        util::read_file(testutil::fixture("golden/reference_units.json")));
    auto schematics = parse_corpus();
    REQUIRE(schematics.size() == reference.size());

    for (std::size_t i = 0; i < schematics.size(); ++i) {
        const auto& schematic = schematics[i];
        const auto& ref = reference[i];
        REQUIRE(schematic.path == ref.at("path").get<std::string>());
        REQUIRE(schematic.parse_ok);

        std::multiset<std::string> got, want;
        for (const auto& unit : schematic.units) got.insert(unit.qualified_name);
        for (const auto& unit : ref.at("units"))
            want.insert(unit.at("qualified_name").get<std::string>());
        CHECK_MESSAGE(got == want, "unit-name mismatch in ", schematic.path);
    }
}

TEST_CASE("corpus: every unit field agrees with the reference parse") {
    auto reference = nlohmann::json::parse(
        util::read_file(testutil::fixture("golden/reference_units.json")));
    auto schematics = parse_corpus();

    std::size_t checked = 0;
    for (std::size_t i = 0; i < schematics.size(); ++i) {
        const auto& units = schematics[i].units;
        const auto& ref_units = reference[i].at("units");
        REQUIRE(units.size() == ref_units.size());
        for (std::size_t u = 0; u < units.size(); ++u) {
            const auto& unit = units[u];
            const auto& ref = ref_units[u];
            INFO("file ", schematics[i].path, " unit ", unit.qualified_name);
            CHECK(std::string(to_string(unit.kind)) == ref.at("kind").get<std::string>());
            CHECK(unit.arg_names() == ref.at("args").get<std::vector<std::string>>());
            CHECK(unit.signature == ref.at("signature").get<std::string>());
            CHECK(unit.decorators == ref.at("decorators").get<std::vector<std::string>>());
            if (ref.at("docstring").is_null())
                CHECK_FALSE(unit.docstring.has_value());
            else
                CHECK(unit.docstring == ref.at("docstring").get<std::string>());
            CHECK(unit.return_statements ==
                  ref.at("return_statements").get<std::vector<std::string>>());
            CHECK(unit.start_line == ref.at("span").at(0).get<int>());
            CHECK(unit.end_line == ref.at("span").at(1).get<int>());
            ++checked;
        }
    }
    CHECK(checked >= 100);  // corpus size guarantee
}

TEST_CASE("corpus: span extraction re-parses to the same unit (round trip)") {
    auto schematics = parse_corpus();
    const auto corpus = testutil::fixture("corpus");
    for (const auto& schematic : schematics) {
        const std::string source = util::read_file(corpus / schematic.path);
        bool ends_nl = false;
        auto lines = util::split_lines(source, &ends_nl);
        for (const auto& unit : schematic.units) {
            INFO("file ", schematic.path, " unit ", unit.qualified_name);
            std::string span_text;
            for (int line = unit.start_line; line <= unit.end_line; ++line)
                span_text += lines[static_cast<std::size_t>(line - 1)] + "\n";
            auto reparsed = indexer::parse_file("span.py", util::dedent(span_text));
            REQUIRE(reparsed.parse_ok);
            REQUIRE_FALSE(reparsed.units.empty());
            const auto& top = reparsed.units.front();
            CHECK(top.name == unit.name);
            CHECK(top.arg_names() == unit.arg_names());
            if (unit.kind == UnitKind::Class)
                CHECK(top.kind == UnitKind::Class);
            else
                CHECK(top.kind == UnitKind::Function);  // methods lose class context
        }
    }
}

TEST_CASE("scan_repository maps directories to sorted source files") {
    testutil::TempDir tmp("scan");
    util::write_file(tmp / "repo/a/x.py", "x = 1\n");
    util::write_file(tmp / "repo/a/b/y.py", "y = 2\n");
    util::write_file(tmp / "repo/a/b/z.txt", "not source\n");
    auto result = indexer::scan_repository((tmp / "repo").string());
    CHECK(result.map.entries.size() == 2);
    CHECK(result.map.entries.at("a") == std::vector<std::string>{"x.py"});
    CHECK(result.map.entries.at("a/b") == std::vector<std::string>{"y.py"});
    CHECK(result.map.contains("a/b/y.py"));
    CHECK_FALSE(result.map.contains("a/b/z.txt"));
}

TEST_CASE("scan_repository: empty directory yields an empty map") {
    testutil::TempDir tmp("scan_empty");
    std::filesystem::create_directories(tmp / "repo");
    auto result = indexer::scan_repository((tmp / "repo").string());
    CHECK(result.map.empty());
    CHECK(indexer::render_repo_map(result.map) == "{}");
}

TEST_CASE("scan_repository: missing root is fatal; excluded dirs are pruned") {
    CHECK_THROWS_AS(indexer::scan_repository("/nonexistent/path/xyz"), ConfigError);

    testutil::TempDir tmp("scan_excl");
    util::write_file(tmp / "repo/pkg/mod.py", "a = 1\n");
    util::write_file(tmp / "repo/.git/hook.py", "b = 2\n");
    util::write_file(tmp / "repo/__pycache__/mod.py", "c = 3\n");
    util::write_file(tmp / "repo/extras/skipme/deep.py", "d = 4\n");
    indexer::IndexConfig config;
    config.exclude_globs.push_back("skip*");
    auto result = indexer::scan_repository((tmp / "repo").string(), config);
    CHECK(result.map.entries.size() == 1);
    CHECK(result.map.contains("pkg/mod.py"));
}

TEST_CASE("render_repo_map is byte-stable across runs") {
    testutil::TempDir tmp("scan_det");
    util::write_file(tmp / "repo/m/tools/boilerplate.py", "\n");
    util::write_file(tmp / "repo/m/tools/subset.py", "\n");
    util::write_file(tmp / "repo/m/ci/check.py", "\n");
    auto first = indexer::render_repo_map(indexer::scan_repository((tmp / "repo").string()).map);
    auto second = indexer::render_repo_map(indexer::scan_repository((tmp / "repo").string()).map);
    CHECK(first == second);
    CHECK(first.find("\"m/tools\": [") != std::string::npos);
    CHECK(first.find("\"boilerplate.py\"") != std::string::npos);
}

TEST_CASE("render_repo_map_budgeted prunes deepest directories first") {
    indexer::RepoFileMap map;
    map.entries["."] = {"top.py"};
    map.entries["a"] = {"one.py"};
    map.entries["a/b/c/d"] = {"deep.py"};
    bool truncated = false;
    auto full = indexer::render_repo_map(map);
    auto pruned = indexer::render_repo_map_budgeted(map, full.size() - 1, &truncated);
    CHECK(truncated);
    CHECK(pruned.find("deep.py") == std::string::npos);
    CHECK(pruned.find("top.py") != std::string::npos);
}

TEST_CASE("build_embedding_documents emits one document per function/method") {
    const std::string src =
        "class A:\n"
        "    def f(self, x):\n"
        "        return x\n"
        "\n"
        "def g():\n"
        "    pass\n";
    auto schematic = indexer::parse_file("mod.py", src);
    auto docs = indexer::build_embedding_documents(schematic);
    REQUIRE(docs.size() == 2);  // class itself produces no document
    CHECK(docs[0].unit_qualified_name == "A.f");
    CHECK(docs[0].parent_class == "A");
    CHECK(docs[0].file_name == "mod.py");
    CHECK(util::starts_with(docs[0].document, "Method f with arguments ['self', 'x'] "
                                              "have signature as def f(self, x):"));
    CHECK(docs[1].unit_qualified_name == "g");
    CHECK_FALSE(docs[1].parent_class.has_value());
}

TEST_CASE("documents substitute None for absent docstring/decorators/returns") {
    auto schematic = indexer::parse_file("m.py", "def f():\n    pass\n");
    auto docs = indexer::build_embedding_documents(schematic);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].document.find("described using None") != std::string::npos);
    CHECK(docs[0].document.find("have None as decorators") != std::string::npos);
    CHECK(docs[0].document.find("return statement described as None.") != std::string::npos);
}

TEST_CASE("failed parses and empty schematics yield no documents") {
    auto bad = indexer::parse_file("bad.py", "def f(\n");
    CHECK(indexer::build_embedding_documents(bad).empty());
    auto empty = indexer::parse_file("e.py", "");
    CHECK(indexer::build_embedding_documents(empty).empty());
}

TEST_CASE("corpus: golden embedding documents match byte-for-byte") {
    auto goldens =
        nlohmann::json::parse(util::read_file(testutil::fixture("golden/golden_docs.json")));
    REQUIRE(goldens.size() == 20);

    std::map<std::string, std::vector<indexer::EmbeddingDocument>> docs_by_file;
    for (const auto& schematic : parse_corpus())
        docs_by_file[schematic.path] = indexer::build_embedding_documents(schematic);

    for (const auto& golden : goldens) {
        const std::string file = golden.at("file_name");
        const std::string qualified = golden.at("qualified_name");
        const int start_line = golden.at("start_line");
        bool found = false;
        for (const auto& doc : docs_by_file[file]) {
            if (doc.unit_qualified_name == qualified && doc.unit_start_line == start_line) {
                found = true;
                INFO("document for ", file, "::", qualified);
                CHECK(doc.document == golden.at("document").get<std::string>());
                if (golden.at("parent_class").is_null())
                    CHECK_FALSE(doc.parent_class.has_value());
                else
                    CHECK(doc.parent_class == golden.at("parent_class").get<std::string>());
            }
        }
        CHECK_MESSAGE(found, "no document for ", file, "::", qualified);
    }
}

TEST_CASE("schematic json round-trips") {
    auto schematic = indexer::parse_file(
        "r.py", "@deco\ndef f(a, b=1, *args, **kw):\n    '''doc'''\n    return a\n");
    nlohmann::json j = schematic;
    auto back = j.get<indexer::FileSchematic>();
    CHECK(back.units == schematic.units);
    CHECK(back.path == schematic.path);
}

TEST_CASE("schematic map rendering is deterministic and nests methods") {
    auto schematic = indexer::parse_file(
        "mod.py",
        "class A:\n    '''class doc'''\n    def m(self):\n        pass\n\ndef free():\n    pass\n");
    auto rendered = indexer::render_schematic_map({schematic});
    CHECK(rendered.find("\"file\": \"mod.py\"") != std::string::npos);
    CHECK(rendered.find("\"m\"") != std::string::npos);
    CHECK(rendered.find("\"free\"") != std::string::npos);
    CHECK(rendered == indexer::render_schematic_map({schematic}));
}
