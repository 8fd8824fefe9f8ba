#ifndef FORESTALG_TESTKIT_BRUTE_ACCEPTS_HPP
#define FORESTALG_TESTKIT_BRUTE_ACCEPTS_HPP

// Acceptance of finite forests by exhaustive run enumeration.  All branches
// are finite, so priorities play no role: a run exists iff every node can be
// given a state whose transition admits some tuple of child states.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "forestalg/automaton.hpp"
#include "forestalg/forest.hpp"

namespace forestalg::testkit {

namespace detail {

// plain subset simulation, kept separate from the library's NFA helpers
inline bool nfa_accepts_word(const Nfa& n, const std::vector<int>& word)
{
    std::set<int> cur(n.initial.begin(), n.initial.end());
    for (int letter : word) {
        std::set<int> next;
        for (int p : cur)
            for (const auto& t : n.delta[p])
                if (t.letter == letter) next.insert(t.to);
        cur.swap(next);
    }
    for (int p : cur)
        if (n.final[p]) return true;
    return false;
}

// Does some tuple in the product of `options` satisfy `ok`?
inline bool some_tuple(const std::vector<std::vector<int>>& options, std::vector<int>& cur,
                       const std::function<bool(const std::vector<int>&)>& ok)
{
    if (cur.size() == options.size()) return ok(cur);
    for (int q : options[cur.size()]) {
        cur.push_back(q);
        bool found = some_tuple(options, cur, ok);
        cur.pop_back();
        if (found) return true;
    }
    return false;
}

}  // namespace detail

/// Exhaustive acceptance check on an acyclic forest graph (interpreted via
/// its finite unravelling).  Throws ForestError on cyclic input.
inline bool brute_accepts(const ParityForestAutomaton& aut, const ForestGraph& g)
{
    auto scc = strongly_connected_components(g.adjacency());
    for (bool c : scc.cyclic)
        if (c) throw ForestError("brute_accepts needs an acyclic forest");
    const int nq = aut.num_states();
    std::map<NodeId, std::vector<int>> memo;  // states with an accepting run at the node

    auto admits = [&](const TransitionItem& item, const std::vector<Edge>& children,
                      const std::vector<std::vector<int>>& options) {
        // children are visited in graph order; each edge label forms one word
        std::vector<int> cur;
        return detail::some_tuple(options, cur, [&](const std::vector<int>& states) {
            std::map<int, std::vector<int>> words;
            for (std::size_t i = 0; i < children.size(); ++i) words[children[i].label].push_back(states[i]);
            for (const auto& [label, word] : words) {
                auto it = item.children.find(label);
                if (it == item.children.end()) return false;
                if (!detail::nfa_accepts_word(it->second, word)) return false;
            }
            for (const auto& [label, nfa] : item.children)
                if (!words.count(label) && !detail::nfa_accepts_word(nfa, {})) return false;
            return true;
        });
    };

    std::function<const std::vector<int>&(NodeId)> good = [&](NodeId v) -> const std::vector<int>& {
        auto it = memo.find(v);
        if (it != memo.end()) return it->second;
        const auto& node = g.node(v);
        std::vector<Edge> children = node.children;
        std::stable_sort(children.begin(), children.end(), [](const Edge& a, const Edge& b) { return a.label < b.label; });
        std::vector<std::vector<int>> options;
        for (const auto& e : children) options.push_back(good(e.target));
        std::vector<int> out;
        for (int q = 0; q < nq; ++q)
            for (const auto& item : aut.items(q, node.label.text()))
                if (admits(item, children, options)) {
                    out.push_back(q);
                    break;
                }
        return memo.emplace(v, std::move(out)).first->second;
    };

    std::vector<std::vector<int>> options;
    for (NodeId r : g.roots()) options.push_back(good(r));
    std::vector<int> cur;
    return detail::some_tuple(options, cur, [&](const std::vector<int>& states) {
        return detail::nfa_accepts_word(aut.root, states);
    });
}

}  // namespace forestalg::testkit

#endif  // FORESTALG_TESTKIT_BRUTE_ACCEPTS_HPP
