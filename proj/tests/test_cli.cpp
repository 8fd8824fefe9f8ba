#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

std::string fx(const std::string& file) { return std::string(FIXTURE_DIR) + "/" + file; }

// stdout only unless `merge` is set
Run run(const std::string& args, bool merge = false)
{
    std::string cmd = std::string(CLI_PATH) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool has(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

}  // namespace

TEST(Cli, BisimInvariance)
{
    auto ok = run("check bisim-invariance " + fx("contains_a.alg"));
    EXPECT_EQ(ok.code, 0) << ok.out;
    auto bad = run("check bisim-invariance " + fx("two_a.alg"));
    EXPECT_EQ(bad.code, 1);
    EXPECT_TRUE(has(bad.out, "witness: c + c = c")) << bad.out;
    auto warned = run("check bisim-invariance " + fx("two_a.alg"), true);
    EXPECT_TRUE(has(warned.out, "refute-only")) << warned.out;
    EXPECT_EQ(run("check bisim-invariance --mode full " + fx("two_a.alg")).code, 2);
}

TEST(Cli, Ef)
{
    EXPECT_EQ(run("check ef " + fx("contains_a.alg")).code, 0);
    auto r = run("check ef " + fx("two_a.alg"));
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(has(r.out, "c = c+c")) << r.out;
}

TEST(Cli, Cef)
{
    EXPECT_EQ(run("check cef --k 2 " + fx("two_a.alg")).code, 0);
    EXPECT_EQ(run("check cef --k 1 " + fx("two_a.alg")).code, 1);
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(run("check cef --k " + std::to_string(k) + " " + fx("infinite_branch.alg")).code, 1);
    auto autoK = run("check cef-auto " + fx("contains_a.alg"));
    EXPECT_EQ(autoK.code, 0);
    EXPECT_TRUE(has(autoK.out, "K = 18\n")) << autoK.out;
    EXPECT_EQ(run("check cef " + fx("two_a.alg")).code, 2);
    EXPECT_EQ(run("check cef --k 0 " + fx("two_a.alg")).code, 2);
}

TEST(Cli, JsonVerdict)
{
    auto r = run("--json check cef --k 1 " + fx("two_a.alg"));
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["check"], "cef_k");
    EXPECT_EQ(j["k"], 1);
    EXPECT_EQ(j["verdict"], "fail");
    ASSERT_FALSE(j["failures"].empty());
    EXPECT_EQ(j["failures"][0]["equation"], "G1_k");
    auto again = run("check cef --k 1 --json " + fx("two_a.alg"));
    EXPECT_EQ(again.out, r.out);
}

TEST(Cli, ModelCheck)
{
    auto r = run("modelcheck --formula \"E1(Pa)\" --forest " + fx("single_a.forest"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "true\n");
    auto lit = run("modelcheck --semantics literal --formula \"E1(Pa)\" --forest " + fx("single_a.forest"));
    EXPECT_EQ(lit.code, 1);
    EXPECT_EQ(lit.out, "false\n");
    EXPECT_EQ(run("modelcheck --formula \"E5(Pa)\" --forest " + fx("a_loop.forest")).out, "true\n");
    EXPECT_EQ(run("modelcheck --formula \"E2(Pb)\" --forest \"b(a) + b\"").out, "true\n");
    auto err = run("modelcheck --formula \"Pa\" --forest " + fx("single_a.forest"), true);
    EXPECT_EQ(err.code, 2);
    EXPECT_TRUE(has(err.out, "tree formula where forest formula expected")) << err.out;
}

TEST(Cli, EquivAndBisim)
{
    EXPECT_EQ(run("equiv \"a\" \"a + a\" --k 1 --m 1").out, "true\n");
    auto r = run("equiv \"a\" \"a + a\" --k 2 --m 1");
    EXPECT_EQ(r.out, "false\n");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(run("bisim \"a + a\" \"a\"").code, 0);
    EXPECT_EQ(run("bisim " + fx("a_loop.forest") + " " + fx("a_chain3.forest")).code, 1);
    EXPECT_EQ(run("equiv \"a\" \"a\" --k 1").code, 2);
}

TEST(Cli, Types)
{
    auto r = run("types \"a(b)\" --k 2 --m 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(has(r.out, "a{1*b}")) << r.out;
    auto j = nlohmann::json::parse(run("types --json \"a(b)\" --k 2 --m 1").out);
    EXPECT_FALSE(j.empty());
}

TEST(Cli, ValidateEvalTablesK)
{
    for (const std::string f : {"contains_a.alg", "two_a.alg", "infinite_branch.alg", "trivial.alg", "single_a.forest",
                                "a_loop.forest", "a_plus_a.forest", "b_loop_side_a.forest", "a_chain3.forest"})
        EXPECT_EQ(run("validate --samples 50 " + fx(f)).code, 0) << f;
    EXPECT_EQ(run("validate " + fx("context_a_x0.forest")).code, 0);
    EXPECT_EQ(run("eval " + fx("contains_a.alg") + " \"b(a)\"").out, "1_0\n");
    EXPECT_EQ(run("eval " + fx("two_a.alg") + " " + fx("a_plus_a.forest")).out, "c2\n");
    EXPECT_EQ(run("eval " + fx("infinite_branch.alg") + " " + fx("a_loop.forest")).out, "inf\n");
    EXPECT_EQ(run("K " + fx("contains_a.alg")).out, "18\n");
    auto t1 = run("tables " + fx("two_a.alg"));
    auto t2 = run("tables " + fx("two_a.alg"));
    EXPECT_EQ(t1.code, 0);
    EXPECT_EQ(t1.out, t2.out);
    EXPECT_TRUE(has(t1.out, "zero: c0")) << t1.out;
}

TEST(Cli, Errors)
{
    EXPECT_EQ(run("check ef /nonexistent.alg").code, 2);
    EXPECT_EQ(run("check nonsense " + fx("two_a.alg")).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    std::string bad = ::testing::TempDir() + "bad.alg";
    std::ofstream(bad) << "{\"arities\": {\"0\": [\"z\"]}, \"automata\": {}}";
    auto r = run("check ef " + bad, true);
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(has(r.out, "arity 1")) << r.out;
}
