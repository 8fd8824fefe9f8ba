#ifndef FORESTALG_TESTKIT_GAME_EQUIV_HPP
#define FORESTALG_TESTKIT_GAME_EQUIV_HPP

// Counting bisimilarity of finite forests by direct tuple matching on the
// unravellings (no types involved).

#include <functional>
#include <string>
#include <vector>

#include "forestalg/forest.hpp"

namespace forestalg::testkit {

namespace detail {

/// An explicit finite tree pool: the unravelling of an acyclic graph.
struct Unravelled {
    std::vector<std::string> label;
    std::vector<std::vector<int>> descendants;  // strict descendants
    std::vector<int> roots;
    std::vector<int> all;  // every vertex of the forest

    explicit Unravelled(const ForestGraph& g)
    {
        auto scc = strongly_connected_components(g.adjacency());
        for (bool c : scc.cyclic)
            if (c) throw ForestError("game_equiv needs an acyclic forest");
        std::function<int(NodeId)> copy = [&](NodeId v) {
            int id = static_cast<int>(label.size());
            label.push_back(g.node(v).label.text());
            descendants.emplace_back();
            std::vector<int> below;
            for (const auto& e : g.node(v).children) {
                int c = copy(e.target);
                below.push_back(c);
                below.insert(below.end(), descendants[c].begin(), descendants[c].end());
            }
            descendants[id] = std::move(below);
            return id;
        };
        for (NodeId r : g.roots()) {
            int id = copy(r);
            roots.push_back(id);
        }
        for (int v = 0; v < static_cast<int>(label.size()); ++v) all.push_back(v);
    }
};

class TupleGame {
public:
    TupleGame(const Unravelled& s, const Unravelled& t, int k, int max_m)
        : s_(s), t_(t), k_(k), ns_(s.label.size()), nt_(t.label.size()),
          memo_(ns_ * nt_ * static_cast<std::size_t>(max_m + 1), -1)
    {
    }

    // trees s|x and t|y at level m
    bool trees(int x, int y, int m)
    {
        if (s_.label[x] != t_.label[y]) return false;
        if (m == 0) return true;
        auto& slot = memo_[(static_cast<std::size_t>(m) * ns_ + static_cast<std::size_t>(x)) * nt_ + static_cast<std::size_t>(y)];
        if (slot < 0) slot = sets(s_.descendants[x], t_.descendants[y], m - 1) ? 1 : 0;
        return slot == 1;
    }

    // every k-tuple from xs is matched by one from ys and vice versa
    bool sets(const std::vector<int>& xs, const std::vector<int>& ys, int m)
    {
        return covers(xs, ys, m, false) && covers(ys, xs, m, true);
    }

private:
    bool related(int a, int b, int m, bool swapped) { return swapped ? trees(b, a, m) : trees(a, b, m); }

    bool covers(const std::vector<int>& xs, const std::vector<int>& ys, int m, bool swapped)
    {
        if (xs.empty()) return true;
        std::vector<int> tuple;
        return all_tuples(tuple, xs, ys, m, swapped);
    }

    bool all_tuples(std::vector<int>& tuple, const std::vector<int>& xs, const std::vector<int>& ys, int m, bool swapped)
    {
        if (static_cast<int>(tuple.size()) == k_) {
            std::vector<int> yt;
            return some_match(tuple, yt, ys, m, swapped);
        }
        for (int x : xs) {
            tuple.push_back(x);
            bool ok = all_tuples(tuple, xs, ys, m, swapped);
            tuple.pop_back();
            if (!ok) return false;
        }
        return true;
    }

    // a tuple yt over ys related pointwise to xt with the same equality pattern
    bool some_match(const std::vector<int>& xt, std::vector<int>& yt, const std::vector<int>& ys, int m, bool swapped)
    {
        std::size_t i = yt.size();
        if (i == xt.size()) return true;
        for (int y : ys) {
            bool ok = related(xt[i], y, m, swapped);
            for (std::size_t j = 0; ok && j < i; ++j) ok = (xt[i] == xt[j]) == (y == yt[j]);
            if (!ok) continue;
            yt.push_back(y);
            bool found = some_match(xt, yt, ys, m, swapped);
            yt.pop_back();
            if (found) return true;
        }
        return false;
    }

    const Unravelled& s_;
    const Unravelled& t_;
    int k_;
    std::size_t ns_, nt_;
    std::vector<signed char> memo_;
};

}  // namespace detail

/// Unravel once, compare many times.
using UnravelledForest = detail::Unravelled;

/// Forest-level counting bisimilarity at count bound k and depth m; every
/// forest is related to every other at m = 0.
inline bool game_equiv(const UnravelledForest& us, const UnravelledForest& ut, int k, int m)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (m == 0) return true;
    detail::TupleGame game(us, ut, k, m);
    return game.sets(us.all, ut.all, m - 1);
}

inline bool game_equiv(const ForestGraph& s, const ForestGraph& t, int k, int m)
{
    return game_equiv(detail::Unravelled(s), detail::Unravelled(t), k, m);
}

/// Tree-level counting bisimilarity of the subtrees at the given nodes.
inline bool game_equiv_trees(const ForestGraph& s, NodeId x, const ForestGraph& t, NodeId y, int k, int m)
{
    detail::Unravelled us(subtree(s, x)), ut(subtree(t, y));
    detail::TupleGame game(us, ut, k, m);
    return game.trees(us.roots.at(0), ut.roots.at(0), m);
}

}  // namespace forestalg::testkit

#endif  // FORESTALG_TESTKIT_GAME_EQUIV_HPP
