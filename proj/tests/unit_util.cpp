#include "doctest.h"

#include "repofix/util/fs.hpp"
#include "repofix/util/glob.hpp"
#include "repofix/util/sha256.hpp"
#include "repofix/util/strings.hpp"
#include "repofix/util/subprocess.hpp"
#include "test_util.hpp"

using namespace repofix;

TEST_CASE("split_lines round-trips with join_lines") {
    bool nl = false;
    auto lines = util::split_lines("a\nb\nc\n", &nl);
    CHECK(lines == std::vector<std::string>{"a", "b", "c"});
    CHECK(nl);
    CHECK(util::join_lines(lines, nl) == "a\nb\nc\n");

    lines = util::split_lines("a\nb", &nl);
    CHECK(lines.size() == 2);
    CHECK_FALSE(nl);
    CHECK(util::join_lines(lines, nl) == "a\nb");

    lines = util::split_lines("", &nl);
    CHECK(lines.empty());
    CHECK_FALSE(nl);
}

TEST_CASE("dedent strips the common leading whitespace") {
    CHECK(util::dedent("    def f():\n        pass\n") == "def f():\n    pass\n");
    CHECK(util::dedent("def f():\n    pass\n") == "def f():\n    pass\n");
    CHECK(util::dedent("  a\n\n  b") == "a\n\nb");
}

TEST_CASE("quote_single escapes quotes and backslashes") {
    CHECK(util::quote_single("self") == "'self'");
    CHECK(util::quote_single("it's") == "'it\\'s'");
    CHECK(util::quote_single("a\\b") == "'a\\\\b'");
    CHECK(util::render_string_list({}) == "[]");
    CHECK(util::render_string_list({"a", "b"}) == "['a', 'b']");
}

TEST_CASE("glob matching") {
    CHECK(util::glob_match("*.py", "x.py"));
    CHECK_FALSE(util::glob_match("*.py", "x.pyc"));
    CHECK(util::glob_match("test_*", "test_alpha"));
    CHECK(util::glob_match("a/*/c", "a/b/c"));
    CHECK_FALSE(util::glob_match("a/*/c", "a/b/d/c"));
    CHECK(util::glob_match("*cache*", "__pycache__"));
}

TEST_CASE("sha256 known vector") {
    CHECK(util::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(util::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("copy_tree skips excluded directories and hash_tree sees all files") {
    testutil::TempDir tmp("copytree");
    util::write_file(tmp / "src/a.txt", "alpha");
    util::write_file(tmp / "src/.git/objects/x", "vcs");
    util::write_file(tmp / "src/sub/b.txt", "beta");
    util::copy_tree(tmp / "src", tmp / "dst");
    CHECK(std::filesystem::exists(tmp / "dst/a.txt"));
    CHECK(std::filesystem::exists(tmp / "dst/sub/b.txt"));
    CHECK_FALSE(std::filesystem::exists(tmp / "dst/.git"));

    auto hashes = util::hash_tree(tmp / "dst");
    CHECK(hashes.size() == 2);
    CHECK(hashes.at("a.txt") == util::sha256_hex("alpha"));
}

TEST_CASE("run_command captures output and honors the timeout") {
    testutil::TempDir tmp("subproc");
    auto ok = util::run_command({"python3", "-c", "print('out'); import sys; print('err', file=sys.stderr)"},
                                tmp.path(), {}, 30.0);
    CHECK_FALSE(ok.spawn_failed);
    CHECK(ok.exit_code == 0);
    CHECK(ok.stdout_text == "out\n");
    CHECK(ok.stderr_text == "err\n");

    auto missing = util::run_command({"definitely-not-a-command-xyz"}, tmp.path(), {}, 5.0);
    CHECK(missing.spawn_failed);

    auto timed = util::run_command({"python3", "-c", "import time; time.sleep(30)"},
                                   tmp.path(), {}, 1.0);
    CHECK(timed.timed_out);

    auto env = util::run_command({"python3", "-c", "import os; print(os.environ['RF_PROBE'])"},
                                 tmp.path(), {{"RF_PROBE", "42"}}, 30.0);
    CHECK(env.stdout_text == "42\n");
}
