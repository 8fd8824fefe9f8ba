#ifndef FORESTALG_TESTKIT_EQUIV_PAIRS_HPP
#define FORESTALG_TESTKIT_EQUIV_PAIRS_HPP

// Pairs of regular forests that are counting-bisimilar, produced by
// type-preserving mutations, and a few fixed families of such pairs.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "forestalg/forest.hpp"
#include "forestalg/random.hpp"
#include "forestalg/types.hpp"

namespace forestalg::testkit {

/// Renames symbols through `letters` (unmapped symbols are kept).
inline ForestGraph relabel(const ForestGraph& g, const std::map<std::string, std::string>& letters,
                           const RankedAlphabet& target)
{
    ForestGraph out = g;
    out.set_alphabet(target);
    for (std::size_t v = 0; v < out.size(); ++v) {
        auto& label = out.mutable_node(static_cast<NodeId>(v)).label;
        if (label.is_variable()) continue;
        auto it = letters.find(label.symbol);
        if (it != letters.end()) label.symbol = it->second;
    }
    return out;
}

/// a-chain of n vertices in which every vertex has `fold` edges to the next one.
inline ForestGraph folded_chain(const RankedAlphabet& alphabet, const std::string& a, int n, int fold)
{
    ForestGraph g(alphabet);
    for (int i = 0; i < n; ++i) g.add_node(Label::sym(a));
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j < fold; ++j) g.add_edge(i, 0, i + 1);
    if (n > 0) g.add_root(0);
    return g;
}

/// A vertex with `fold` self-loops and `fold` edges into a folded chain of
/// length `tail`.
inline ForestGraph folded_loop_with_tail(const RankedAlphabet& alphabet, const std::string& a, int tail, int fold)
{
    ForestGraph g = folded_chain(alphabet, a, tail, fold);
    NodeId z = g.add_node(Label::sym(a));
    for (int j = 0; j < fold; ++j) {
        g.add_edge(z, 0, z);
        if (tail > 0) g.add_edge(z, 0, 0);
    }
    g.set_roots({z});
    return g.trimmed();
}

namespace detail {

inline void shuffle_order(std::mt19937_64& rng, ForestGraph& g)
{
    auto roots = g.roots();
    std::shuffle(roots.begin(), roots.end(), rng);
    g.set_roots(roots);
    for (std::size_t v = 0; v < g.size(); ++v) {
        auto& ch = g.mutable_node(static_cast<NodeId>(v)).children;
        std::shuffle(ch.begin(), ch.end(), rng);
    }
}

// Copies vertex v (same label and edges) and moves one of the edges into v
// (or one root occurrence) onto the copy.  The unravelling is unchanged.
inline void unroll(std::mt19937_64& rng, ForestGraph& g)
{
    if (g.size() == 0) return;
    std::vector<std::pair<NodeId, std::size_t>> incoming;  // (source, edge index); source -1 for roots
    NodeId v = static_cast<NodeId>(uniform(rng, 0, static_cast<int>(g.size()) - 1));
    for (std::size_t u = 0; u < g.size(); ++u) {
        const auto& ch = g.node(static_cast<NodeId>(u)).children;
        for (std::size_t i = 0; i < ch.size(); ++i)
            if (ch[i].target == v) incoming.emplace_back(static_cast<NodeId>(u), i);
    }
    for (std::size_t i = 0; i < g.roots().size(); ++i)
        if (g.roots()[i] == v) incoming.emplace_back(-1, i);
    if (incoming.empty()) return;
    NodeId copy = g.add_node(g.node(v).label);
    g.mutable_node(copy).children = g.node(v).children;
    auto [src, idx] = incoming[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(incoming.size()) - 1))];
    if (src < 0) {
        auto roots = g.roots();
        roots[idx] = copy;
        g.set_roots(roots);
    } else {
        g.mutable_node(src).children[idx].target = copy;
    }
}

// Multiplies one edge (or all roots) so that it occurs `times` times.
inline void multiply(ForestGraph& g, NodeId v, std::size_t edge, int times)
{
    if (v < 0) {
        auto roots = g.roots();
        std::vector<NodeId> out;
        for (int i = 0; i < times; ++i) out.insert(out.end(), roots.begin(), roots.end());
        g.set_roots(out);
        return;
    }
    auto& ch = g.mutable_node(v).children;
    Edge e = ch.at(edge);
    for (int i = 1; i < times; ++i) ch.push_back(e);
}

}  // namespace detail

/// `count` pairs (s, t) with Tp_k^m(s) = Tp_k^m(t).  t is derived from s by
/// reordering, loop unrolling and duplication of a part that already occurs
/// k times; candidates that fail the equivalence check are dropped.
inline std::vector<std::pair<ForestGraph, ForestGraph>> sample_equiv_pairs(const RankedAlphabet& alphabet, int k, int m,
                                                                          int count, std::uint64_t seed,
                                                                          int max_nodes = 5)
{
    std::mt19937_64 rng(seed);
    std::vector<std::pair<ForestGraph, ForestGraph>> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 100 * count + 1000) throw std::runtime_error("sample_equiv_pairs: too many rejected candidates");
        ForestGraph s = random_regular_forest(rng, alphabet, uniform(rng, 1, max_nodes));
        if (s.empty()) continue;
        ForestGraph t = s;
        // duplication beyond k: the chosen part occurs k times in s and k+1 times in t
        if (uniform(rng, 0, 1)) {
            std::vector<std::pair<NodeId, std::size_t>> edges{{-1, 0}};
            for (std::size_t v = 0; v < s.size(); ++v)
                for (std::size_t i = 0; i < s.node(static_cast<NodeId>(v)).children.size(); ++i)
                    edges.emplace_back(static_cast<NodeId>(v), i);
            auto [v, i] = edges[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(edges.size()) - 1))];
            detail::multiply(s, v, i, k);
            t = s;
            detail::multiply(t, v, i, v < 0 ? 1 : 2);
            if (v < 0) {
                auto roots = t.roots();
                auto extra = std::vector<NodeId>(roots.begin(), roots.begin() + static_cast<long>(roots.size() / k));
                roots.insert(roots.end(), extra.begin(), extra.end());
                t.set_roots(roots);
            }
        }
        int unrolls = uniform(rng, 0, 3);
        for (int i = 0; i < unrolls; ++i) detail::unroll(rng, t);
        detail::shuffle_order(rng, t);
        if (!equiv(s, t, k, m)) continue;
        out.emplace_back(std::move(s), std::move(t));
    }
    return out;
}

}  // namespace forestalg::testkit

#endif  // FORESTALG_TESTKIT_EQUIV_PAIRS_HPP
