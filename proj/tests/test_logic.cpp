#include <gtest/gtest.h>

#include <random>

#include "forestalg/forestalg.hpp"
#include "forestalg/testkit/testkit.hpp"

using namespace forestalg;
namespace tk = forestalg::testkit;

namespace {

RankedAlphabet ab() { return RankedAlphabet::unranked({"a", "b"}); }
RankedAlphabet abc() { return RankedAlphabet::unranked({"a", "b", "c"}); }

ForestGraph term(const std::string& t) { return parse_term(t, abc()); }

ForestGraph self_loop(const std::string& a)
{
    ForestGraph g(abc());
    auto v = g.add_node(a);
    g.add_edge(v, 0, v);
    g.add_root(v);
    return g;
}

// Exact evaluation by walking every path of an acyclic graph.
struct NaiveChecker {
    const ForestGraph& g;
    Semantics sem;

    void descendants(NodeId v, std::vector<NodeId>& out) const
    {
        for (const auto& e : g.node(v).children) {
            out.push_back(e.target);
            descendants(e.target, out);
        }
    }

    bool forest(const std::vector<NodeId>& roots, const Formula& f) const
    {
        switch (f.kind) {
        case Formula::Kind::True: return true;
        case Formula::Kind::False: return false;
        case Formula::Kind::Not: return !forest(roots, *f.args[0]);
        case Formula::Kind::And:
            for (const auto& a : f.args)
                if (!forest(roots, *a)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& a : f.args)
                if (forest(roots, *a)) return true;
            return false;
        case Formula::Kind::Exists: {
            std::vector<NodeId> all;
            for (NodeId r : roots) {
                if (sem == Semantics::Inclusive) all.push_back(r);
                descendants(r, all);
            }
            int n = 0;
            for (NodeId v : all) n += tree(v, *f.args[0]) ? 1 : 0;
            return n >= f.count;
        }
        default: throw std::logic_error("atom at forest position");
        }
    }

    bool tree(NodeId v, const Formula& f) const
    {
        switch (f.kind) {
        case Formula::Kind::Atom: return g.node(v).label.text() == f.symbol;
        case Formula::Kind::Not: return !tree(v, *f.args[0]);
        case Formula::Kind::And:
            for (const auto& a : f.args)
                if (!tree(v, *a)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& a : f.args)
                if (tree(v, *a)) return true;
            return false;
        default: {
            std::vector<NodeId> succ;
            for (const auto& e : g.node(v).children) succ.push_back(e.target);
            return forest(succ, f);
        }
        }
    }
};

class FormulaGen {
public:
    FormulaGen(std::mt19937_64& rng, int k) : rng_(rng), k_(k) {}

    FormulaPtr forest(int depth)
    {
        if (depth == 0) return pick(2) ? fml::top() : fml::bottom();
        switch (pick(5)) {
        case 0: return fml::neg(forest(depth));
        case 1: return fml::conj({forest(depth), forest(depth - 1)});
        case 2: return fml::disj({forest(depth - 1), forest(depth)});
        default: return fml::exists(1 + pick(k_), tree(depth - 1));
        }
    }

    FormulaPtr tree(int depth)
    {
        switch (pick(depth > 0 ? 6 : 4)) {
        case 0: return fml::neg(tree(depth));
        case 1: return fml::conj({tree(depth), atom()});
        case 2:
        case 3: return atom();
        default: return forest(depth);
        }
    }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    FormulaPtr atom() { return fml::atom(pick(2) ? "a" : "b"); }

    std::mt19937_64& rng_;
    int k_;
};

std::vector<std::set<int>> universe(TypeTable& table, const std::vector<ForestGraph>& corpus, int m)
{
    std::vector<std::set<int>> u;
    for (int r = 0; r < m; ++r) u.push_back(realized_types(table, corpus, r));
    return u;
}

}  // namespace

TEST(Formula, ParseAndPrint)
{
    EXPECT_EQ(to_string(parse_formula("E1(Pa)")), "E1(Pa)");
    EXPECT_EQ(to_string(parse_formula("E(Pa)")), "E1(Pa)");
    EXPECT_EQ(to_string(parse_formula("E2(Pa & E1(Pb))")), "E2(Pa & E1(Pb))");
    auto f = parse_formula("E2(Pa & E1(Pb))");
    EXPECT_EQ(k_index(*f), 2);
    EXPECT_EQ(depth(*f), 2);
    for (const std::string text : {"!E1(Pa) | E3(!Pb & (Pa | E1(Pb)))", "(E1(Pa) | E1(Pb)) & !E2(Pc)", "true", "!(E1(Pa) & E1(Pb))"}) {
        auto once = to_string(parse_formula(text));
        EXPECT_EQ(to_string(parse_formula(once)), once) << text;
    }
}

TEST(Formula, TreeFormulaAtForestPosition)
{
    try {
        (void)parse_formula("Pa");
        FAIL() << "expected an error";
    } catch (const FormulaError& e) {
        EXPECT_NE(std::string(e.what()).find("tree formula where forest formula expected"), std::string::npos);
    }
    EXPECT_THROW((void)parse_formula("E1(Pa) & Pb"), FormulaError);
    EXPECT_NO_THROW((void)parse_tree_formula("Pa & E1(Pb)"));
}

TEST(Formula, SyntaxErrorPosition)
{
    try {
        (void)parse_formula("E1(Pa) & & E1(Pb)");
        FAIL() << "expected an error";
    } catch (const FormulaError& e) {
        EXPECT_EQ(e.position(), 9U);
    }
    EXPECT_THROW((void)parse_formula("E1(Pa"), FormulaError);
    EXPECT_THROW((void)parse_formula("E0(Pa)"), FormulaError);
}

TEST(ModelCheck, Semantics)
{
    auto phi = parse_formula("E1(Pa)");
    EXPECT_TRUE(modelcheck(term("a"), phi, Semantics::Inclusive));
    EXPECT_FALSE(modelcheck(term("a"), phi, Semantics::Literal));
    auto two = parse_formula("E2(Pa)");
    EXPECT_FALSE(modelcheck(term("b(a)"), two, Semantics::Inclusive));
    EXPECT_FALSE(modelcheck(term("b(a)"), two, Semantics::Literal));
    EXPECT_TRUE(modelcheck(term("b(a)"), phi, Semantics::Literal));
}

TEST(ModelCheck, SelfLoopCountsUnboundedly)
{
    for (int k = 1; k <= 10; ++k) {
        auto phi = fml::exists(k, fml::atom("a"));
        EXPECT_TRUE(modelcheck(self_loop("a"), phi, Semantics::Inclusive)) << k;
        EXPECT_TRUE(modelcheck(self_loop("a"), phi, Semantics::Literal)) << k;
    }
    EXPECT_FALSE(modelcheck(self_loop("a"), parse_formula("E1(Pb)")));
}

TEST(ModelCheck, TreeFormulaUsesSuccessorForest)
{
    // the root's successor forest is b + c
    auto g = term("a(b + c)");
    EXPECT_TRUE(modelcheck(g, parse_formula("E1(Pa & E1(Pb) & E1(Pc))")));
    EXPECT_FALSE(modelcheck(g, parse_formula("E1(Pa & E1(Pa))")));
}

TEST(ModelCheck, VariablesRejected)
{
    EXPECT_THROW((void)modelcheck(parse_term("a(x0)", abc()), parse_formula("E1(Pa)")), std::exception);
}

TEST(ModelCheck, CappedEqualsExactOnAcyclic)
{
    std::mt19937_64 rng(12);
    FormulaGen gen(rng, 3);
    for (int i = 0; i < 400; ++i) {
        auto g = random_finite_forest(rng, ab(), 1 + i % 12);
        auto phi = gen.forest(1 + i % 3);
        for (auto sem : {Semantics::Inclusive, Semantics::Literal}) {
            NaiveChecker naive{g, sem};
            EXPECT_EQ(modelcheck(g, phi, sem), naive.forest(g.roots(), *phi)) << to_term(g) << " |= " << to_string(phi);
        }
    }
}

TEST(Types, RankZeroIsLabel)
{
    TypeTable t(2);
    auto g = term("a(b + c(a))");
    auto per_rank = all_tree_types(t, g, 0);
    for (std::size_t v = 0; v < g.size(); ++v)
        EXPECT_EQ(t.to_text(per_rank[0][v]), g.node(static_cast<NodeId>(v)).label.text());
}

TEST(Types, SmallExamples)
{
    TypeTable one(1);
    EXPECT_EQ(one.to_text(Tp(one, term("a"), 1)), "{1*a}");
    TypeTable two(2);
    auto g = term("a(b)");
    EXPECT_EQ(two.to_text(tp(two, g, g.roots()[0], 1)), "a{1*b}");
    EXPECT_EQ(two.to_text(Tp(two, term("a + a + a"), 1)), "{2*a}");
    EXPECT_EQ(Tp(two, term("a"), 0), Tp(two, term("b(c)"), 0));
}

TEST(Types, InterningIsContentAddressed)
{
    TypeTable t(2);
    int x = Tp(t, term("a(b) + c"), 2);
    int y = Tp(t, term("c + a(b)"), 2);
    EXPECT_EQ(x, y);
    auto j = t.to_json(x);
    EXPECT_TRUE(j.contains("theta"));
}

TEST(Equiv, Examples)
{
    auto s = term("a(b + c) + b");
    EXPECT_TRUE(equiv(s, s, 2, 3));
    EXPECT_TRUE(equiv(term("a"), term("a + a"), 1, 1));
    EXPECT_FALSE(equiv(term("a"), term("a + a"), 2, 1));
    EXPECT_TRUE(equiv(term("a(a(a))"), self_loop("a"), 1, 1));
    EXPECT_FALSE(equiv(term("a(b)"), term("a(c)"), 1, 1));
}

TEST(Equiv, GameOracleExamples)
{
    EXPECT_FALSE(tk::game_equiv(term("a(b)"), term("a(c)"), 1, 1));
    auto s = term("a(b + b) + c");
    EXPECT_TRUE(tk::game_equiv(s, s, 2, 2));
    EXPECT_THROW((void)tk::game_equiv(self_loop("a"), s, 1, 1), std::exception);
}

TEST(Equiv, TriangleOnSmallForests)
{
    auto forests = tk::all_forests(ab(), 4);
    for (int k = 1; k <= 2; ++k)
        for (int m = 1; m <= 2; ++m) {
            TypeTable table(k);
            auto chi = ChiBuilder(table, universe(table, forests, m));
            std::vector<int> types;
            for (const auto& f : forests) types.push_back(Tp(table, f, m));
            for (std::size_t i = 0; i < forests.size(); i += 3)
                for (std::size_t j = i; j < forests.size(); j += 5) {
                    bool same = types[i] == types[j];
                    ASSERT_EQ(same, tk::game_equiv(forests[i], forests[j], k, m))
                        << to_term(forests[i]) << " vs " << to_term(forests[j]) << " k=" << k << " m=" << m;
                    auto phi = chi.chi(types[i]);
                    ASSERT_TRUE(modelcheck(forests[i], phi));
                    ASSERT_EQ(modelcheck(forests[j], phi), same);
                }
        }
}

TEST(Equiv, Monotonicity)
{
    auto forests = tk::all_forests(ab(), 4);
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> pick(0, forests.size() - 1);
    int coarse_only = 0;
    for (int i = 0; i < 500; ++i) {
        const auto& s = forests[pick(rng)];
        const auto& t = forests[pick(rng)];
        for (int k = 1; k <= 2; ++k)
            for (int m = 1; m <= 2; ++m) {
                if (equiv(s, t, k, m + 1)) EXPECT_TRUE(equiv(s, t, k, m));
                if (equiv(s, t, k + 1, m)) EXPECT_TRUE(equiv(s, t, k, m));
                coarse_only += equiv(s, t, k, m) && !equiv(s, t, k + 1, m + 1) ? 1 : 0;
            }
    }
    EXPECT_GT(coarse_only, 0);
}

TEST(Equiv, FormulasRespectTypes)
{
    std::mt19937_64 rng(31);
    for (int k = 1; k <= 2; ++k)
        for (int m = 1; m <= 2; ++m) {
            auto pairs = tk::sample_equiv_pairs(ab(), k, m, 25, 100 + static_cast<std::uint64_t>(10 * k + m));
            FormulaGen gen(rng, k);
            for (int i = 0; i < 100; ++i) {
                auto phi = gen.forest(1 + i % m);
                ASSERT_LE(k_index(*phi), k);
                ASSERT_LE(depth(*phi), m);
                const auto& [s, t] = pairs[static_cast<std::size_t>(i) % pairs.size()];
                EXPECT_EQ(modelcheck(s, phi), modelcheck(t, phi)) << to_term(s) << " / " << to_term(t) << " : " << to_string(phi);
            }
        }
}

TEST(Chi, RankZero)
{
    TypeTable t(1);
    auto g = term("b");
    int id = all_tree_types(t, g, 0)[0][0];
    ChiBuilder chi(t, {});
    EXPECT_EQ(to_string(chi.chi(id)), "Pb");
}

TEST(Chi, SelfDescriptionOnRegularForests)
{
    std::mt19937_64 rng(44);
    std::vector<ForestGraph> corpus;
    for (int i = 0; i < 60; ++i) corpus.push_back(random_regular_forest(rng, ab(), 1 + i % 5));
    for (int k = 1; k <= 2; ++k)
        for (int m = 1; m <= 3; ++m) {
            TypeTable table(k);
            ChiBuilder chi(table, universe(table, corpus, m));
            std::vector<int> types;
            for (const auto& g : corpus) types.push_back(Tp(table, g, m));
            for (std::size_t i = 0; i < corpus.size(); i += 7) {
                auto phi = chi.chi(types[i]);
                for (std::size_t j = 0; j < corpus.size(); ++j)
                    EXPECT_EQ(modelcheck(corpus[j], phi), types[i] == types[j]) << to_term(corpus[j]);
            }
        }
}
