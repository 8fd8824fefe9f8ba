#include <gtest/gtest.h>

#include "forestalg/forest.hpp"
#include "forestalg/forest_io.hpp"
#include "forestalg/random.hpp"

using namespace forestalg;

namespace {

RankedAlphabet abc()
{
    RankedAlphabet a;
    a.add("a", 1);
    a.add("b", 1);
    a.add("c", 0);
    a.add("f", 2);
    return a;
}

bool has_violation(const ForestGraph& g, ViolationKind kind)
{
    for (const auto& v : validate(g))
        if (v.kind == kind) return true;
    return false;
}

ForestGraph term(const std::string& t) { return parse_term(t, abc()); }

// unravelling of a finite graph as nested term text, to compare denotations
// independently of canonical_form
std::string unravel(const ForestGraph& g, NodeId v, int depth)
{
    std::string s = g.node(v).label.text();
    if (depth == 0) return s + "...";
    auto ch = g.sorted_children(v);
    if (ch.empty()) return s;
    s += "(";
    for (const auto& e : ch) s += std::to_string(e.label) + ":" + unravel(g, e.target, depth - 1) + " ";
    return s + ")";
}

std::string unravel(const ForestGraph& g, int depth)
{
    std::string s;
    for (NodeId r : g.roots()) s += unravel(g, r, depth) + " | ";
    return s;
}

}  // namespace

TEST(Validate, RootVariableIsRejected)
{
    ForestGraph g(abc());
    g.add_root(g.add_node("x0"));
    EXPECT_TRUE(has_violation(g, ViolationKind::RootIsVariable));
}

TEST(Validate, EdgeLabelBeyondArity)
{
    ForestGraph g(abc());
    NodeId a = g.add_node("a");
    g.add_edge(a, 3, g.add_node("c"));
    g.add_root(a);
    EXPECT_TRUE(has_violation(g, ViolationKind::EdgeLabelExceedsArity));
}

TEST(Validate, VariableBelowCycle)
{
    ForestGraph g(abc());
    NodeId a = g.add_node("f");
    g.add_edge(a, 0, a);
    g.add_edge(a, 1, g.add_node("x0"));
    g.add_root(a);
    EXPECT_TRUE(has_violation(g, ViolationKind::VariableReachableFromCycle));
}

TEST(Validate, MissingVariableAndChildrenOfVariables)
{
    ForestGraph g(abc());
    NodeId a = g.add_node("a");
    NodeId x = g.add_node("x1");
    g.add_edge(a, 0, x);
    g.add_root(a);
    EXPECT_TRUE(has_violation(g, ViolationKind::MissingVariable));

    ForestGraph h(abc());
    NodeId b = h.add_node("b");
    NodeId y = h.add_node("x0");
    h.add_edge(b, 0, y);
    h.add_edge(y, 0, h.add_node("c"));
    h.add_root(b);
    EXPECT_TRUE(has_violation(h, ViolationKind::VariableHasChildren));
}

TEST(Validate, AcceptsLoopsWithoutVariables)
{
    ForestGraph g(abc());
    NodeId a = g.add_node("a");
    g.add_edge(a, 0, a);
    g.add_root(a);
    EXPECT_TRUE(is_valid(g));
}

TEST(Hsum, EmptyIsUnit)
{
    auto s = term("a(b + c) + c");
    EXPECT_TRUE(same_forest(hsum(empty_forest(abc()), s), s));
    EXPECT_TRUE(same_forest(hsum(s, empty_forest(abc())), s));
}

TEST(Hsum, TwoRoots)
{
    auto g = hsum(term("a"), term("b"));
    EXPECT_EQ(g.roots().size(), 2u);
    EXPECT_EQ(to_term(g), "a + b");
}

TEST(Hsum, DuplicateIsBisimilar)
{
    auto a = term("a");
    EXPECT_TRUE(bisimilar(hsum(a, a), a));
    EXPECT_FALSE(same_forest(hsum(a, a), a));
}

TEST(Substitute, ReplacesVariableLeaves)
{
    EXPECT_TRUE(same_forest(substitute(term("a(x0)"), 0, term("b")), term("a(b)")));
    EXPECT_TRUE(same_forest(substitute(term("a(x0)"), 0, term("b + c")), term("a(b + c)")));
    EXPECT_TRUE(same_forest(substitute(term("a(x0 + x0)"), 0, term("b")), term("a(b + b)")));
}

TEST(Substitute, OutOfRange)
{
    EXPECT_THROW(substitute(term("a(x0)"), 1, term("b")), ForestError);
}

TEST(Substitute, IntoSingletonAttachesBelow)
{
    auto t = term("b(c) + c");
    EXPECT_TRUE(same_forest(substitute(sing(abc(), "a"), 0, t), term("a(b(c) + c)")));
}

TEST(Sing, Shapes)
{
    EXPECT_EQ(to_term(sing(abc(), "c")), "c");
    EXPECT_EQ(to_term(sing(abc(), "a")), "a(x0)");
    EXPECT_EQ(to_term(sing(abc(), "f")), "f(x0, x1)");
    EXPECT_THROW(sing(abc(), "zz"), ForestError);
}

TEST(Flatten, SingletonLabelsGiveBackTheForest)
{
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        auto s = random_finite_forest(rng, abc(), uniform(rng, 1, 7));
        NestedForest n;
        std::vector<NodeId> id(s.size());
        for (std::size_t v = 0; v < s.size(); ++v) id[v] = n.add(sing(abc(), s.node(static_cast<NodeId>(v)).label.symbol));
        for (std::size_t v = 0; v < s.size(); ++v)
            for (const auto& e : s.node(static_cast<NodeId>(v)).children) n.add_edge(id[v], e.label, id[e.target]);
        for (NodeId r : s.roots()) n.roots.push_back(id[r]);
        auto f = flatten(n, abc());
        EXPECT_TRUE(same_forest(f, s)) << to_term(s);
        EXPECT_EQ(unravel(f, 9), unravel(s, 9));
        EXPECT_TRUE(is_valid(f));
    }
}

TEST(Flatten, OneLevel)
{
    NestedForest n;
    NodeId top = n.add(term("a(x0)"));
    n.add_edge(top, 0, n.add(term("b")));
    n.roots.push_back(top);
    EXPECT_TRUE(same_forest(flatten(n, abc()), term("a(b)")));
}

TEST(Flatten, BracketingsAgree)
{
    // flatten(flatten of inner levels) against flattening the outer level first
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        NestedForest outer = random_nested_forest(rng, abc(), 4, 4, 2, 0);
        // each label becomes a nested forest with singleton labels, flattened first
        NestedForest inner_first = outer;
        for (auto& node : inner_first.nodes) {
            if (node.variable >= 0) continue;
            NestedForest lift;
            const auto& lbl = node.label;
            std::vector<NodeId> id(lbl.size());
            for (std::size_t v = 0; v < lbl.size(); ++v) {
                const auto& l = lbl.node(static_cast<NodeId>(v)).label;
                id[v] = l.is_variable() ? lift.add_variable(l.variable) : lift.add(sing(abc(), l.symbol));
            }
            for (std::size_t v = 0; v < lbl.size(); ++v)
                for (const auto& e : lbl.node(static_cast<NodeId>(v)).children) lift.add_edge(id[v], e.label, id[e.target]);
            for (NodeId r : lbl.roots()) lift.roots.push_back(id[r]);
            node.label = flatten(lift, abc());
        }
        auto a = flatten(outer, abc());
        auto b = flatten(inner_first, abc());
        EXPECT_TRUE(same_forest(a, b));
        EXPECT_EQ(unravel(a, 8), unravel(b, 8));
    }
}

TEST(Subtree, RootOfSingleTree)
{
    auto g = term("f(b(c), c)");
    EXPECT_TRUE(same_forest(subtree(g, g.roots()[0]), g));
}

TEST(Subtree, SuccessorForest)
{
    auto g = term("a(b + c)");
    EXPECT_EQ(to_term(successor_forest(g, g.roots()[0])), "b + c");
}

TEST(Subtree, OnCycle)
{
    ForestGraph g(abc());
    NodeId a = g.add_node("a");
    NodeId b = g.add_node("b");
    g.add_edge(a, 0, b);
    g.add_edge(b, 0, a);
    g.add_root(a);
    auto s = subtree(g, b);
    EXPECT_TRUE(is_valid(s));
    EXPECT_EQ(unravel(s, 5), "b(0:a(0:b(0:a(0:b(0:a... ) ) ) ) ) | ");
}

TEST(Bisimilar, Basics)
{
    EXPECT_TRUE(bisimilar(term("a"), term("a + a")));
    EXPECT_FALSE(bisimilar(term("a"), term("b")));
    ForestGraph loop(abc());
    NodeId v = loop.add_node("a");
    loop.add_edge(v, 0, v);
    loop.add_root(v);
    EXPECT_FALSE(bisimilar(loop, term("a(a)")));
    EXPECT_THROW(bisimilar(term("a(x0)"), term("a")), ForestError);
}

TEST(Bisimilar, EquivalenceOnSamples)
{
    Rng rng(5);
    RankedAlphabet un;
    un.add("a", 1);
    un.add("b", 1);
    std::vector<ForestGraph> pool;
    for (int i = 0; i < 40; ++i) pool.push_back(random_regular_forest(rng, un, uniform(rng, 1, 4)));
    for (const auto& s : pool) EXPECT_TRUE(bisimilar(s, s));
    for (const auto& s : pool)
        for (const auto& t : pool) {
            EXPECT_EQ(bisimilar(s, t), bisimilar(t, s));
            if (!bisimilar(s, t)) continue;
            for (const auto& u : pool)
                if (bisimilar(t, u)) {
                    EXPECT_TRUE(bisimilar(s, u));
                }
        }
}

TEST(Canonical, OrderAndSharing)
{
    // shared and copied subtrees denote the same forest
    ForestGraph shared(abc());
    NodeId c = shared.add_node("c");
    NodeId f = shared.add_node("f");
    shared.add_edge(f, 0, c);
    shared.add_edge(f, 1, c);
    shared.add_root(f);
    EXPECT_TRUE(same_forest(shared, term("f(c, c)")));
    EXPECT_FALSE(same_forest(term("a(b + c)"), term("a(c + b)")));
    EXPECT_TRUE(bisimilar(term("a(b(c) + c)"), term("a(c + b(c))")));
}

TEST(Io, TermRoundTrip)
{
    for (const std::string t : {"0", "f(b + c, 0) + c", "f(a(c), 0) + b(x0)", "f(0, c)"}) {
        RankedAlphabet al = abc();
        auto g = parse_term(t, al);
        auto again = parse_term(to_term(g), al);
        EXPECT_TRUE(same_forest(g, again)) << t;
    }
    EXPECT_THROW(parse_term("a(", abc()), ForestError);
    EXPECT_THROW(parse_term("c(c)", abc()), ForestError);
}

TEST(Io, JsonRoundTrip)
{
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        auto g = random_regular_forest(rng, abc(), uniform(rng, 1, 6));
        auto back = forest_from_json(json::parse(forest_to_json(g).dump()));
        EXPECT_TRUE(same_forest(g, back));
        EXPECT_EQ(back.alphabet().symbols(), g.alphabet().symbols());
    }
    EXPECT_THROW(forest_from_json(json::parse(R"({"roots":[1],"nodes":[{"id":0,"label":"a"}]})")), ForestError);
}

TEST(Io, ExampleTermFromDocs)
{
    RankedAlphabet al;
    al.add("a", 3);
    al.add("b", 0);
    al.add("c", 0);
    auto g = parse_term("a(b + c, 0, b) + b", al);
    EXPECT_EQ(g.roots().size(), 2u);
    EXPECT_EQ(to_term(g), "a(b + c, 0, b) + b");
}

TEST(Operations, OutputsAreValid)
{
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        auto s = random_finite_forest(rng, abc(), uniform(rng, 1, 6), {0});
        auto t = random_finite_forest(rng, abc(), uniform(rng, 1, 6));
        if (!is_valid(s)) continue;
        EXPECT_TRUE(is_valid(hsum(t, t)));
        if (s.arity() > 0) {
            EXPECT_TRUE(is_valid(substitute(s, 0, t)));
        }
    }
}
