#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "forestalg/forestalg.hpp"
#include "forestalg/testkit/testkit.hpp"

using namespace forestalg;
namespace tk = forestalg::testkit;

namespace {

RankedAlphabet ab() { return RankedAlphabet::unranked({"a", "b"}); }

// some vertex is labelled b; y = "contains b", n = anything
ParityForestAutomaton some_b()
{
    return automaton_from_json(json::parse(R"({
      "states": ["y", "n"],
      "priority": {"y": 1, "n": 0},
      "root": "n* y n*",
      "delta": [
        {"state": "y", "symbol": "a", "items": [{"0": "n* y n*"}]},
        {"state": "y", "symbol": "b", "items": [{"0": "n*"}]},
        {"state": "n", "symbols": ["a", "b"], "items": [{"0": "n*"}]}
      ]})"));
}

// every branch is finite
ParityForestAutomaton well_founded()
{
    return automaton_from_json(json::parse(R"({
      "states": ["f"],
      "priority": {"f": 1},
      "root": "f*",
      "delta": [{"state": "f", "symbols": ["a", "b"], "items": [{"0": "f*"}]}]})"));
}

Nfa random_nfa(std::mt19937_64& rng, int letters)
{
    Nfa n;
    int k = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int i = 0; i < k; ++i) n.add_state();
    n.initial.push_back(0);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < k; ++i) {
        n.final[static_cast<std::size_t>(i)] = coin(rng);
        for (int l = 0; l < letters; ++l)
            for (int j = 0; j < k; ++j)
                if (coin(rng)) n.add_transition(i, l, j);
    }
    return n;
}

ParityForestAutomaton random_automaton(std::mt19937_64& rng)
{
    ParityForestAutomaton a;
    int q = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < q; ++i) {
        a.states.push_back("q" + std::to_string(i));
        a.priority.push_back(std::uniform_int_distribution<int>(0, 3)(rng));
    }
    a.root = random_nfa(rng, q);
    for (int i = 0; i < q; ++i)
        for (const std::string s : {"a", "b"}) {
            int items = std::uniform_int_distribution<int>(0, 2)(rng);
            for (int t = 0; t < items; ++t) {
                TransitionItem item;
                if (std::bernoulli_distribution(0.8)(rng)) item.children.emplace(0, random_nfa(rng, q));
                a.add_item(i, s, item);
            }
            a.alphabet.insert(s);
        }
    return a;
}

ParityGame dual(const ParityGame& g)
{
    ParityGame d = g;
    for (auto& p : d.positions) {
        p.owner = opponent(p.owner);
        p.priority += 1;
        if (p.terminal_winner) p.terminal_winner = opponent(*p.terminal_winner);
    }
    return d;
}

ForestGraph loop_with_side(const std::string& loop_label, const std::string& side_label)
{
    ForestGraph g(ab());
    auto r = g.add_node(loop_label);
    auto s = g.add_node(side_label);
    g.add_edge(r, 0, r);
    g.add_edge(r, 0, s);
    g.add_root(r);
    return g;
}

}  // namespace

TEST(Automaton, UniversalAcceptsEverything)
{
    auto u = ParityForestAutomaton::universal(ab());
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
        auto g = random_regular_forest(rng, ab(), 1 + i % 6);
        EXPECT_TRUE(accepts(u, g));
    }
    EXPECT_TRUE(accepts(u, empty_forest(ab())));
}

TEST(Automaton, MissingLabelRejected)
{
    auto g = loop_with_side("a", "a");
    EXPECT_FALSE(accepts(some_b(), g));
    EXPECT_FALSE(accepts(some_b(), parse_term("a(a(a))", ab())));
}

TEST(Automaton, ReachabilityThroughLoop)
{
    EXPECT_TRUE(accepts(some_b(), loop_with_side("a", "b")));
    EXPECT_TRUE(accepts(some_b(), parse_term("a(a) + a(b)", ab())));
}

TEST(Automaton, WellFoundedness)
{
    EXPECT_TRUE(accepts(well_founded(), parse_term("a(b(a) + b)", ab())));
    EXPECT_FALSE(accepts(well_founded(), loop_with_side("a", "b")));
}

TEST(Automaton, EncodingsAgree)
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 150; ++i) {
        auto aut = random_automaton(rng);
        auto g = random_regular_forest(rng, ab(), 1 + i % 5);
        EXPECT_EQ(accepts(aut, g, GameEncoding::Full), accepts(aut, g, GameEncoding::Interleaved)) << to_term(g);
    }
}

TEST(Automaton, SingleNodeGameIsSmall)
{
    auto g = parse_term("a", ab());
    for (auto enc : {GameEncoding::Full, GameEncoding::Auto}) {
        auto game = membership_game(ParityForestAutomaton::universal(ab()), g, enc);
        EXPECT_LE(game.size(), 3U);
        EXPECT_TRUE(solve(game).verifier_wins(0));
    }
}

TEST(Automaton, GameSizeBound)
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 60; ++i) {
        auto aut = random_automaton(rng);
        auto g = random_regular_forest(rng, ab(), 1 + i % 5);
        auto game = membership_game(aut, g, GameEncoding::Full);
        std::size_t arity = 0;
        for (const auto& n : g.nodes()) arity = std::max(arity, n.children.size());
        arity = std::max(arity, g.roots().size());
        std::size_t assignments = 1;
        for (std::size_t j = 0; j < arity; ++j) assignments *= static_cast<std::size_t>(aut.num_states());
        // one extra node for the root gadget
        EXPECT_LE(game.size(), (g.size() + 1) * static_cast<std::size_t>(aut.num_states()) * (1 + assignments));
    }
}

TEST(Automaton, ParsesFromJson)
{
    auto a = some_b();
    EXPECT_EQ(a.num_states(), 2);
    EXPECT_EQ(a.priority[a.state_index("y")], 1);
    EXPECT_THROW((void)a.state_index("zz"), AutomatonError);
    EXPECT_THROW(automaton_from_json(json::parse(R"({"states": ["q"], "root": "q r", "delta": []})")), AutomatonError);
}

TEST(Automaton, AgreesWithBruteForceOnAcyclic)
{
    std::mt19937_64 rng(99);
    int accepted = 0;
    for (int i = 0; i < 1000; ++i) {
        auto aut = random_automaton(rng);
        auto g = random_finite_forest(rng, ab(), 1 + i % 12);
        bool fast = accepts(aut, g);
        accepted += fast ? 1 : 0;
        EXPECT_EQ(fast, tk::brute_accepts(aut, g)) << to_term(g);
    }
    EXPECT_GT(accepted, 0);
    EXPECT_LT(accepted, 1000);
}

TEST(Solve, SelfLoops)
{
    ParityGame g;
    int even = g.add_position(Player::Verifier, 2);
    int odd = g.add_position(Player::Refuter, 3);
    g.add_edge(even, even);
    g.add_edge(odd, odd);
    auto s = solve(g);
    EXPECT_EQ(s.winner[even], Player::Verifier);
    EXPECT_EQ(s.winner[odd], Player::Refuter);
    EXPECT_EQ(s.strategy[even], even);
}

TEST(Solve, Terminals)
{
    ParityGame g;
    int v = g.add_position(Player::Verifier, 1);
    int win = g.add_terminal(Player::Verifier);
    int lose = g.add_terminal(Player::Refuter);
    g.add_edge(v, lose);
    g.add_edge(v, win);
    auto s = solve(g);
    EXPECT_TRUE(s.verifier_wins(v));
    EXPECT_EQ(s.strategy[v], win);
    EXPECT_FALSE(s.verifier_wins(lose));
}

TEST(Solve, MatchesFrozenOracle)
{
    std::ifstream in(std::string(FIXTURE_DIR) + "/expected/parity_games.json");
    ASSERT_TRUE(in.good());
    json expected = json::parse(in);
    ASSERT_TRUE(expected.contains("provenance"));
    std::mt19937_64 rng(expected["provenance"]["seed"].get<std::uint64_t>());
    int count = expected["count"];
    for (int i = 0; i < count; ++i) {
        auto g = tk::random_game(rng, std::uniform_int_distribution<int>(1, 8)(rng));
        std::string w;
        for (auto p : solve(g).winner) w += p == Player::Verifier ? 'V' : 'R';
        ASSERT_EQ(w, expected["winners"][static_cast<std::size_t>(i)].get<std::string>()) << "game " << i;
    }
}

TEST(Solve, MatchesBruteForceFreshSeed)
{
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 300; ++i) {
        auto g = tk::random_game(rng, 1 + i % 9);
        EXPECT_EQ(solve(g).winner, tk::brute_solve(g)) << "game " << i;
    }
}

TEST(Solve, RegionsClosedUnderStrategies)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        auto g = tk::random_game(rng, 2 + i % 20, 6, 4);
        auto s = solve(g);
        for (std::size_t v = 0; v < g.size(); ++v) {
            Player w = s.winner[v];
            const auto& pos = g.positions[v];
            if (g.successors[v].empty()) continue;
            if (pos.owner == w) {
                ASSERT_GE(s.strategy[v], 0);
                EXPECT_EQ(s.winner[static_cast<std::size_t>(s.strategy[v])], w);
            } else {
                for (int u : g.successors[v]) EXPECT_EQ(s.winner[static_cast<std::size_t>(u)], w);
            }
        }
    }
}

TEST(Solve, Duality)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto g = tk::random_game(rng, 1 + i % 25, 5, 3);
        auto a = solve(g).winner;
        auto b = solve(dual(g)).winner;
        for (std::size_t v = 0; v < a.size(); ++v) EXPECT_EQ(b[v], opponent(a[v]));
    }
}
