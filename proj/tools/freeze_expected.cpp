// Runs the brute-force oracles and writes their results to
// fixtures/expected/*.json.  Each file records the oracle and seed.
//
//   freeze-expected [fixture-dir]

#include <fstream>
#include <iostream>
#include <string>

#include "forestalg/forestalg.hpp"
#include "forestalg/testkit/testkit.hpp"

using namespace forestalg;
namespace tk = forestalg::testkit;

namespace {

json provenance(const std::string& oracle, std::uint64_t seed)
{
    return {{"oracle", oracle}, {"seed", seed}};
}

void write(const std::string& path, const json& j)
{
    std::ofstream out(path);
    out << j.dump(1) << '\n';
    std::cout << "wrote " << path << '\n';
}

std::map<std::string, std::string> letters_of(const std::string& alg_path)
{
    auto j = read_json_file(alg_path);
    return j.value("letters", std::map<std::string, std::string>{});
}

// forest counts per size, by enumeration and by the closed form
json enumeration()
{
    json rows = json::array();
    for (int letters = 1; letters <= 2; ++letters) {
        RankedAlphabet a;
        for (int i = 0; i < letters; ++i) a.add(std::string(1, static_cast<char>('a' + i)), 1);
        std::vector<long long> counted(6);
        tk::enum_forests(a, 5, [&](const ForestGraph& g) { ++counted[g.size()]; });
        for (int n = 0; n <= 5; ++n)
            rows.push_back({{"letters", letters}, {"nodes", n}, {"enumerated", counted[static_cast<std::size_t>(n)]},
                            {"closed_form", tk::unary_forest_count(letters, n)}});
    }
    return {{"provenance", provenance("enum_forests, closed form Catalan(n)*letters^n", 0)}, {"counts", rows}};
}

json parity_games(std::uint64_t seed, int count)
{
    std::mt19937_64 rng(seed);
    json games = json::array();
    for (int i = 0; i < count; ++i) {
        auto g = tk::random_game(rng, std::uniform_int_distribution<int>(1, 8)(rng));
        std::string w;
        for (auto p : tk::brute_solve(g)) w += p == Player::Verifier ? 'V' : 'R';
        games.push_back(w);
    }
    return {{"provenance", provenance("brute_solve (all positional strategy pairs)", seed)},
            {"generator", "random_game(rng, uniform(1, 8)), priorities <= 4"},
            {"count", count},
            {"winners", games}};
}

json marked(const Algebra& alg, int cap, int size_bound)
{
    json per_c = json::object();
    for (const auto& c : alg.presentation().of_arity(0)) {
        json triples = json::array();
        for (const auto& [v, i, r] : tk::brute_marked(alg, c, cap, size_bound)) triples.push_back({v, i, r});
        per_c[c] = triples;
    }
    return {{"provenance", provenance("brute_marked", 0)}, {"cap", cap}, {"size_bound", size_bound}, {"triples", per_c}};
}

// partition of small Σ-forests by behaviour in small contexts, with the
// fixture values of each class
json sampler(const Algebra& alg, const std::map<std::string, std::string>& letters, const tk::LanguageOracle& lang,
             const std::string& oracle_name)
{
    auto sigma = RankedAlphabet::unranked({"a", "b"});
    auto classes = tk::syntactic_sampler(lang, sigma, 4, 3);
    json out = json::array();
    for (const auto& cls : classes) {
        std::set<std::string> values;
        for (const auto& s : cls) values.insert(alg.evaluate(tk::relabel(s, letters, alg.alphabet()), 0));
        out.push_back({{"representative", to_term(cls.front())}, {"size", cls.size()}, {"in_language", lang(cls.front())},
                       {"values", values}});
    }
    return {{"provenance", provenance("syntactic_sampler with " + oracle_name, 0)},
            {"size_bound", 4},
            {"context_bound", 3},
            {"classes", out}};
}

int a_count(const ForestGraph& g)
{
    int n = 0;
    for (const auto& node : g.nodes()) n += node.label.symbol == "a" ? 1 : 0;
    return n;
}

bool has_cycle(const ForestGraph& g)
{
    auto reach = g.reachable();
    auto scc = strongly_connected_components(g.adjacency());
    for (std::size_t v = 0; v < g.size(); ++v)
        if (reach[v] && scc.cyclic[static_cast<std::size_t>(scc.component[v])]) return true;
    return false;
}

// long finite chain against the self-loop.  Every edge is repeated k times
// and the loop carries a tail of length m, so that every shallow subtree of
// the chain also occurs (at least k times) below the loop.
json chain_pairs(const Algebra& alg, const std::map<std::string, std::string>& letters)
{
    auto sigma = RankedAlphabet::unranked({"a", "b"});
    json rows = json::array();
    for (int k = 1; k <= 3; ++k) {
        int m = static_cast<int>(invariance_level(alg.presentation(), k));
        int n = 10 * (k + 1) * m;
        auto chain = tk::folded_chain(sigma, "a", n, k);
        auto loop = tk::folded_loop_with_tail(sigma, "a", m, k);
        rows.push_back({{"k", k},
                        {"m", m},
                        {"chain_length", n},
                        {"fold", k},
                        {"tail", m},
                        {"equiv", equiv(chain, loop, k, m)},
                        {"chain_infinite_branch", has_cycle(chain)},
                        {"loop_infinite_branch", has_cycle(loop)},
                        {"chain_value", alg.evaluate(tk::relabel(chain, letters, alg.alphabet()), 0)},
                        {"loop_value", alg.evaluate(tk::relabel(loop, letters, alg.alphabet()), 0)}});
    }
    // finite chains only differ below depth m: decided by the tuple game on
    // the unravellings and by types
    json small = json::array();
    for (int k = 1; k <= 2; ++k)
        for (int m = 1; m <= 3; ++m)
            for (int extra = 0; extra <= 1; ++extra) {
                auto longer = tk::folded_chain(sigma, "a", m + 2, k);
                auto shorter = tk::folded_chain(sigma, "a", m + extra, k);
                small.push_back({{"k", k},
                                 {"m", m},
                                 {"lengths", {m + 2, m + extra}},
                                 {"game_equiv", tk::game_equiv(longer, shorter, k, m)},
                                 {"equiv", equiv(longer, shorter, k, m)}});
            }
    return {{"provenance", provenance("has_cycle membership, equiv at invariance_level, game_equiv on short chains", 0)},
            {"pairs", rows},
            {"short_chains", small}};
}

}  // namespace

int main(int argc, char** argv)
{
    std::string dir = argc > 1 ? argv[1] : "fixtures";
    std::string out = dir + "/expected/";
    try {
        write(out + "enumeration.json", enumeration());
        write(out + "parity_games.json", parity_games(20240611, 500));
        for (const std::string name : {"contains_a", "two_a", "infinite_branch", "trivial"}) {
            Algebra alg(load_presentation(dir + "/" + name + ".alg"));
            write(out + name + ".marked.json", marked(alg, 2, 5));
        }
        {
            Algebra alg(load_presentation(dir + "/two_a.alg"));
            auto lang = [](const ForestGraph& g) { return a_count(g) >= 2; };
            write(out + "two_a.sampler.json", sampler(alg, letters_of(dir + "/two_a.alg"), lang, "a-vertex count >= 2"));
        }
        {
            Algebra alg(load_presentation(dir + "/contains_a.alg"));
            auto lang = [](const ForestGraph& g) { return a_count(g) >= 1; };
            write(out + "contains_a.sampler.json",
                  sampler(alg, letters_of(dir + "/contains_a.alg"), lang, "a-vertex count >= 1"));
        }
        {
            Algebra alg(load_presentation(dir + "/infinite_branch.alg"));
            write(out + "infinite_branch.pairs.json", chain_pairs(alg, letters_of(dir + "/infinite_branch.alg")));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
