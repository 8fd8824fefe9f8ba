#ifndef FORESTALG_RANDOM_HPP
#define FORESTALG_RANDOM_HPP

// Seeded random generators for forests, regular forests and nested forests.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "forestalg/forest.hpp"

namespace forestalg {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v)
{
    return v.at(static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1)));
}

/// Random finite forest with exactly n nodes (n >= 0) over `labels`.
/// Symbols of arity 0 only appear as leaves; every node gets edge labels
/// below its arity.  `variables` lists variable indices allowed at leaves
/// (never at roots).
inline ForestGraph random_finite_forest(Rng& rng, const RankedAlphabet& alphabet, int n,
                                        const std::vector<int>& variables = {})
{
    ForestGraph g(alphabet);
    std::vector<std::string> inner, leaf;
    for (const auto& [s, ar] : alphabet.symbols()) (ar > 0 ? inner : leaf).push_back(s);
    std::vector<std::string> any = inner;
    any.insert(any.end(), leaf.begin(), leaf.end());
    // sizes of subtrees are drawn by recursive splitting
    auto tree = [&](auto&& self, int size, bool is_root) -> NodeId {
        if (size == 1) {
            bool var = !is_root && !variables.empty() && uniform(rng, 0, 2) == 0;
            if (var) return g.add_node(Label::var(pick(rng, variables)));
            return g.add_node(Label::sym(pick(rng, any)));
        }
        NodeId v = g.add_node(Label::sym(pick(rng, inner)));
        int ar = *alphabet.arity_of(g.node(v).label.symbol);
        int rest = size - 1;
        while (rest > 0) {
            int s = uniform(rng, 1, rest);
            rest -= s;
            g.add_edge(v, uniform(rng, 0, ar - 1), self(self, s, false));
        }
        return v;
    };
    int rest = n;
    std::vector<NodeId> roots;
    while (rest > 0) {
        int s = inner.empty() ? 1 : uniform(rng, 1, rest);
        rest -= s;
        roots.push_back(tree(tree, s, true));
    }
    g.set_roots(roots);
    return g;
}

/// Random closed regular forest: a random graph on `n` nodes over an
/// alphabet of positive-arity symbols (arity-0 symbols only at sinks), with
/// 1..3 roots.  Edges may form cycles.
inline ForestGraph random_regular_forest(Rng& rng, const RankedAlphabet& alphabet, int n, double edge_prob = 0.3)
{
    ForestGraph g(alphabet);
    std::vector<std::string> inner, leaf;
    for (const auto& [s, ar] : alphabet.symbols()) (ar > 0 ? inner : leaf).push_back(s);
    std::bernoulli_distribution edge(edge_prob);
    for (int v = 0; v < n; ++v) g.add_node(Label::sym(inner.empty() ? pick(rng, leaf) : pick(rng, inner)));
    for (int v = 0; v < n; ++v) {
        int ar = g.label_arity(v);
        if (ar == 0) continue;
        for (int w = 0; w < n; ++w)
            if (edge(rng)) g.add_edge(v, uniform(rng, 0, ar - 1), w);
    }
    int roots = uniform(rng, 1, std::min(3, std::max(1, n)));
    for (int i = 0; i < roots && n > 0; ++i) g.add_root(uniform(rng, 0, n - 1));
    for (int v = 0; v < n; ++v)
        if (g.node(v).children.empty() && !leaf.empty() && uniform(rng, 0, 1) == 0)
            g.mutable_node(v).label = Label::sym(pick(rng, leaf));
    return g.trimmed();
}

/// Random nested forest (a forest labelled by forests) that flattens to an
/// arity-`outer_arity` forest.  Inner forests have at most `inner_max`
/// nodes and arities up to `max_inner_arity`; the outer forest has at most
/// `outer_max` nodes.
inline NestedForest random_nested_forest(Rng& rng, const RankedAlphabet& alphabet, int outer_max, int inner_max,
                                         int max_inner_arity, int outer_arity)
{
    // every variable below `arity` is placed on a distinct non-root leaf,
    // remaining leaves become variables with probability 1/3
    auto inner_forest = [&](int arity) {
        for (int attempt = 0;; ++attempt) {
            int n = uniform(rng, std::max(1, arity + 1), std::max(inner_max, arity + 1));
            auto f = random_finite_forest(rng, alphabet, n);
            std::vector<bool> is_root(f.size(), false);
            for (NodeId r : f.roots()) is_root[static_cast<std::size_t>(r)] = true;
            std::vector<NodeId> leaves;
            for (std::size_t v = 0; v < f.size(); ++v)
                if (!is_root[v] && f.node(static_cast<NodeId>(v)).children.empty()) leaves.push_back(static_cast<NodeId>(v));
            if (static_cast<int>(leaves.size()) >= arity) {
                std::shuffle(leaves.begin(), leaves.end(), rng);
                for (std::size_t i = 0; i < leaves.size(); ++i) {
                    int x = static_cast<int>(i) < arity ? static_cast<int>(i)
                            : arity > 0 && uniform(rng, 0, 2) == 0 ? uniform(rng, 0, arity - 1) : -1;
                    if (x >= 0) f.mutable_node(leaves[i]).label = Label::var(x);
                }
                if (is_valid(f)) return f;
            }
            if (attempt > 1000) throw ForestError("cannot generate an inner forest of arity " + std::to_string(arity));
        }
    };
    for (int attempt = 0;; ++attempt) {
        NestedForest s;
        int n = uniform(rng, 1, outer_max);
        std::vector<int> outer_vars;
        for (int i = 0; i < outer_arity; ++i) outer_vars.push_back(i);
        // build a random tree-shaped outer forest
        auto node = [&](auto&& self, int size, bool is_root) -> NodeId {
            if (size == 1 && !is_root && !outer_vars.empty() && uniform(rng, 0, 2) == 0)
                return s.add_variable(pick(rng, outer_vars));
            int ar = size == 1 ? uniform(rng, 0, max_inner_arity) : uniform(rng, 1, max_inner_arity);
            NodeId v = s.add(inner_forest(ar));
            int rest = size - 1;
            while (rest > 0) {
                int k = uniform(rng, 1, rest);
                rest -= k;
                s.add_edge(v, uniform(rng, 0, ar - 1), self(self, k, false));
            }
            return v;
        };
        int rest = n;
        while (rest > 0) {
            int k = uniform(rng, 1, rest);
            rest -= k;
            s.roots.push_back(node(node, k, true));
        }
        std::vector<bool> seen(static_cast<std::size_t>(outer_arity), false);
        for (const auto& nd : s.nodes)
            if (nd.variable >= 0) seen[nd.variable] = true;
        if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return s;
        if (attempt > 1000) throw ForestError("cannot generate a nested forest");
    }
}

}  // namespace forestalg

#endif  // FORESTALG_RANDOM_HPP
