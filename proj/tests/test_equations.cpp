#include <gtest/gtest.h>

#include <fstream>

#include "forestalg/forestalg.hpp"

using namespace forestalg;
using T = Term;

namespace {

const Algebra& load(const std::string& name)
{
    static std::map<std::string, std::unique_ptr<Algebra>> cache;
    auto& slot = cache[name];
    if (!slot) slot = std::make_unique<Algebra>(load_presentation(std::string(FIXTURE_DIR) + "/" + name + ".alg"));
    return *slot;
}

long long failures_of(const EquationReport& r, const std::string& equation)
{
    for (const auto& e : r.equations)
        if (e.equation == equation) return e.failures;
    ADD_FAILURE() << "no equation " << equation << " in report";
    return -1;
}

std::set<std::tuple<std::string, int, bool>> named(const DerivedTables& t, const MarkedReachSet& s)
{
    std::set<std::tuple<std::string, int, bool>> out;
    for (auto [d, i, r] : s.triples()) out.emplace(t.A0[d], i, r);
    return out;
}

// a -> b, b -> {b, a}: the two-node loop of [a(b(x0 + x1))^w1]^w0
ForestGraph hand_g8(const RankedAlphabet& sigma, const std::string& a, const std::string& b, bool lhs)
{
    ForestGraph g(sigma);
    NodeId top = g.add_node(Label::sym(a));
    NodeId low = g.add_node(Label::sym(b));
    g.add_root(top);
    g.add_edge(top, 0, low);
    if (lhs) {
        g.add_edge(low, 0, top);
        g.add_edge(low, 0, low);
    } else {
        g.add_edge(low, 0, top);
        g.add_edge(low, 0, top);
    }
    return g;
}

}  // namespace

TEST(Compile, OmegaOfUnaryIsSelfLoop)
{
    const auto& alg = load("contains_a");
    auto g = compile(alg, T::omega(T::app("1_1", {T::var(0)}), 0));
    ASSERT_EQ(g.size(), 1U);
    ASSERT_EQ(g.node(0).children.size(), 1U);
    EXPECT_EQ(g.node(0).children[0].target, 0);
    EXPECT_EQ(alg.evaluate(g, 0), "1_0");
}

TEST(Compile, NestedOmegaGivesTwoNodeLoops)
{
    const auto& alg = load("contains_a");
    for (const std::string a : {"0_1", "1_1"})
        for (const std::string b : {"0_1", "1_1"}) {
            auto inner = T::omega(T::app(b, {T::sum({T::var(0), T::var(1)})}), 1);
            auto lhs = compile(alg, T::omega(T::app(a, {inner}), 0));
            auto rhs = compile(alg, T::omega(T::app(a, {T::app(b, {T::sum({T::var(0), T::var(0)})})}), 0));
            EXPECT_EQ(lhs.size(), 2U);
            EXPECT_EQ(rhs.size(), 2U);
            EXPECT_TRUE(same_forest(lhs, hand_g8(alg.alphabet(), a, b, true)));
            EXPECT_TRUE(same_forest(rhs, hand_g8(alg.alphabet(), a, b, false)));
            EXPECT_EQ(alg.evaluate(lhs, 0), alg.evaluate(rhs, 0));
        }
}

TEST(Compile, IllDefinedOmega)
{
    const auto& alg = load("contains_a");
    EXPECT_THROW((void)compile(alg, T::omega(T::sum({T::var(0), T::elem("1_0")}), 0)), ForestError);
    EXPECT_THROW((void)compile(alg, T::omega(T::app("1_1", {T::var(1)}), 0)), ForestError);
}

TEST(Compile, PiPowerIsChain)
{
    const auto& alg = load("two_a");
    auto g = compile(alg, T::pipow(T::elem("u1")));
    EXPECT_TRUE(same_forest(g, build::chain({"u1", "u1"})));
    EXPECT_EQ(alg.evaluate(g, 1), "u2");
}

TEST(Compile, MatchesTextbookExpansion)
{
    // (a(x) + b(x))^w: both roots loop back to both roots
    const auto& alg = load("two_a");
    auto sigma = alg.alphabet();
    auto g = compile(alg, T::omega(T::sum({T::chain({T::elem("u1")}), T::chain({T::elem("u0_1")})}), 0));
    ForestGraph hand(sigma);
    NodeId a = hand.add_node(Label::sym("u1"));
    NodeId b = hand.add_node(Label::sym("u0_1"));
    for (NodeId v : {a, b}) {
        hand.add_root(v);
        hand.add_edge(v, 0, a);
        hand.add_edge(v, 0, b);
    }
    for (int k = 1; k <= 2; ++k)
        for (int m = 1; m <= 3; ++m) EXPECT_TRUE(equiv(g, hand, k, m));
    EXPECT_TRUE(same_forest(g, hand));

    // (a(x + c))^w
    auto h = compile(alg, T::omega(T::app("u1", {T::sum({T::var(0), T::elem("c1")})}), 0));
    ForestGraph hand2(sigma);
    NodeId r = hand2.add_node(Label::sym("u1"));
    NodeId c = hand2.add_node(Label::sym("c1"));
    hand2.add_root(r);
    hand2.add_edge(r, 0, r);
    hand2.add_edge(r, 0, c);
    EXPECT_TRUE(same_forest(h, hand2));
}

TEST(Constants, ComputeK)
{
    EXPECT_EQ(compute_K(2, 1), 6);
    EXPECT_EQ(compute_K(2, 2), 18);
    EXPECT_EQ(compute_K(1, 1), 2);
    EXPECT_EQ(compute_K(load("contains_a").presentation()), 18);
    EXPECT_EQ(compute_K(load("two_a").presentation()), 6564);
}

TEST(Constants, InvarianceLevel)
{
    EXPECT_EQ(invariance_level(2, 1), 15);
    EXPECT_EQ(invariance_level(3, 2), 24);
    EXPECT_EQ(invariance_level(1, 1), 11);
}

TEST(Bisim, ExampleAlgebraPasses)
{
    auto r = check_bisim_invariance(load("contains_a"), BisimMode::Full);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
    EXPECT_EQ(r.mode, "full");
    EXPECT_EQ(r.equations.size(), 4U);
    EXPECT_EQ(r.verdict(), "pass");
}

TEST(Bisim, CountingAlgebraFails)
{
    const auto& alg = load("two_a");
    auto r = check_bisim_invariance(alg);
    EXPECT_EQ(r.mode, "refute-only");
    EXPECT_FALSE(r.passed());
    ASSERT_FALSE(r.failures.empty());
    const auto& f = r.failures.front();
    EXPECT_EQ(f.equation, "c + c = c");
    EXPECT_EQ(f.instance["c"], "c1");
    // the witness reproduces independently
    std::string c = f.instance["c"];
    EXPECT_NE(alg.evaluate(hsum(sing(alg.alphabet(), c), sing(alg.alphabet(), c)), 0), c);
    EXPECT_THROW((void)check_bisim_invariance(alg, BisimMode::Full), AlgebraError);
}

TEST(Bisim, TrivialAlgebraPasses)
{
    auto r = check_bisim_invariance(load("trivial"), BisimMode::RefuteOnly);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.verdict(), "pass (constant instances)");
    EXPECT_FALSE(r.notes.empty());
}

TEST(Marked, ExampleAlgebra)
{
    const auto& alg = load("contains_a");
    auto t = derive_tables(alg, 1);
    std::set<std::tuple<std::string, int, bool>> expected{{"0_0", 0, false}, {"1_0", 0, false}, {"1_0", 1, true},
                                                          {"1_0", 1, false}, {"1_0", 2, false}, {"1_0", 2, true}};
    EXPECT_EQ(named(t, marked_reach(t, t.index0("1_0"), 2)), expected);
}

TEST(Marked, CapZero)
{
    for (const std::string name : {"contains_a", "two_a", "infinite_branch"}) {
        auto t = derive_tables(load(name), 1);
        for (int c = 0; c < t.n0(); ++c) {
            std::set<std::tuple<int, int, bool>> expected;
            for (int d = 0; d < t.n0(); ++d) expected.emplace(d, 0, false);
            EXPECT_EQ(marked_reach(t, c, 0).triples(), expected) << name;
        }
    }
}

TEST(Marked, CountingAlgebraReachesTwo)
{
    auto t = derive_tables(load("two_a"), 1);
    auto s = marked_reach(t, t.index0("c1"), 2);
    EXPECT_TRUE(s.contains(t.index0("c2"), 2, false));
    EXPECT_FALSE(s.contains(t.index0("c0"), 1, false));
}

TEST(Marked, MatchesFrozenOracle)
{
    for (const std::string name : {"contains_a", "two_a", "infinite_branch", "trivial"}) {
        std::ifstream in(std::string(FIXTURE_DIR) + "/expected/" + name + ".marked.json");
        ASSERT_TRUE(in.good()) << name;
        json expected = json::parse(in);
        ASSERT_TRUE(expected.contains("provenance"));
        int cap = expected["cap"];
        auto t = derive_tables(load(name), 1);
        for (const auto& [c, triples] : expected["triples"].items()) {
            std::set<std::tuple<std::string, int, bool>> want;
            for (const auto& tr : triples) want.emplace(tr[0].get<std::string>(), tr[1].get<int>(), tr[2].get<bool>());
            EXPECT_EQ(named(t, marked_reach(t, t.index0(c), cap)), want) << name << " c=" << c;
        }
    }
}

TEST(Cef, ExampleAlgebra)
{
    auto r = check_cefk(load("contains_a"), 1);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
    EXPECT_EQ(r.equations.size(), 12U);
    auto ef = check_ef(load("contains_a"));
    EXPECT_TRUE(ef.passed());
    EXPECT_EQ(ef.check, "ef");
    auto cef = check_cef(load("contains_a"));
    EXPECT_TRUE(cef.passed());
    ASSERT_TRUE(cef.K.has_value());
    EXPECT_EQ(*cef.K, 18);
}

TEST(Cef, CountingAlgebra)
{
    const auto& alg = load("two_a");
    auto one = check_cefk(alg, 1);
    EXPECT_FALSE(one.passed());
    EXPECT_GT(failures_of(one, "G1_k"), 0);
    EXPECT_TRUE(check_cefk(alg, 2).passed());
    EXPECT_TRUE(check_cefk(alg, 3).passed());
    auto ef = check_ef(alg);
    EXPECT_FALSE(ef.passed());
    EXPECT_GT(failures_of(ef, "c = c+c"), 0);
    EXPECT_TRUE(check_cef(alg).passed());
}

TEST(Cef, InfiniteBranchFails)
{
    for (int k = 1; k <= 3; ++k) {
        auto r = check_cefk(load("infinite_branch"), k);
        EXPECT_FALSE(r.passed()) << k;
        EXPECT_FALSE(r.failures.empty());
    }
    EXPECT_FALSE(check_cef(load("infinite_branch")).passed());
}

TEST(Cef, TrivialPasses)
{
    EXPECT_TRUE(check_ef(load("trivial")).passed());
    EXPECT_TRUE(check_cef(load("trivial")).passed());
}

TEST(Cef, RoutesAgree)
{
    for (const std::string name : {"contains_a", "two_a", "infinite_branch", "trivial"})
        for (int k = 1; k <= 3; ++k) {
            auto g = check_cefk(load(name), k, {.route = Route::Graphs});
            auto t = check_cefk(load(name), k, {.route = Route::Tables});
            ASSERT_EQ(g.equations.size(), t.equations.size());
            for (std::size_t i = 0; i < g.equations.size(); ++i) {
                EXPECT_EQ(g.equations[i].equation, t.equations[i].equation);
                EXPECT_EQ(g.equations[i].instances, t.equations[i].instances) << name << ' ' << g.equations[i].equation;
                EXPECT_EQ(g.equations[i].failures, t.equations[i].failures) << name << ' ' << g.equations[i].equation;
            }
        }
}

TEST(Cef, G1AgreesWithDirectQuantification)
{
    for (const std::string name : {"contains_a", "two_a", "trivial"})
        for (int k = 1; k <= 3; ++k) {
            const auto& alg = load(name);
            auto t = derive_tables(alg, k);
            auto via_marks = check_cefk(alg, t, k);
            auto direct = check_g1_direct(alg, t, k);
            EXPECT_EQ(failures_of(via_marks, "G1_k") == 0, direct.passed()) << name << " k=" << k;
        }
}

TEST(Cef, RejectsHigherGenerators)
{
    auto p = load("contains_a").presentation();
    p.generators = {"1_2"};
    EXPECT_THROW((void)check_cefk(Algebra(p), 1), AlgebraError);
}

TEST(Report, Json)
{
    auto j = check_cefk(load("two_a"), 1).to_json();
    EXPECT_EQ(j["check"], "cef_k");
    EXPECT_EQ(j["k"], 1);
    EXPECT_EQ(j["verdict"], "fail");
    ASSERT_FALSE(j["failures"].empty());
    for (const auto& f : j["failures"]) {
        EXPECT_TRUE(f.contains("instance"));
        EXPECT_NE(f["lhs"], f["rhs"]);
    }
}
