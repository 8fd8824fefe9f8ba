#ifndef FORESTALG_TESTKIT_ENUMERATE_HPP
#define FORESTALG_TESTKIT_ENUMERATE_HPP

// Exhaustive enumeration of small finite ordered forests.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "forestalg/forest.hpp"

namespace forestalg::testkit {

namespace detail {

struct Tree;
using TreePtr = std::shared_ptr<const Tree>;
struct Tree {
    std::string label;
    std::vector<std::vector<TreePtr>> groups;  // one forest per edge label
};

class ForestEnumerator {
public:
    explicit ForestEnumerator(const RankedAlphabet& alphabet) : alphabet_(alphabet) {}

    void forests(int n, const std::function<void(const std::vector<TreePtr>&)>& emit)
    {
        std::vector<TreePtr> cur;
        forests_rec(n, cur, emit);
    }

    const std::vector<TreePtr>& trees(int n)
    {
        auto it = trees_.find(n);
        if (it != trees_.end()) return it->second;
        std::vector<TreePtr> out;
        for (const auto& [label, ar] : alphabet_.symbols()) {
            if (ar == 0) {
                if (n == 1) out.push_back(std::make_shared<const Tree>(Tree{label, {}}));
                continue;
            }
            std::vector<std::vector<TreePtr>> groups(static_cast<std::size_t>(ar));
            groups_rec(label, groups, 0, n - 1, out);
        }
        return trees_.emplace(n, std::move(out)).first->second;
    }

private:
    void forests_rec(int n, std::vector<TreePtr>& cur, const std::function<void(const std::vector<TreePtr>&)>& emit)
    {
        if (n == 0) {
            emit(cur);
            return;
        }
        for (int i = 1; i <= n; ++i)
            for (const auto& t : trees(i)) {
                cur.push_back(t);
                forests_rec(n - i, cur, emit);
                cur.pop_back();
            }
    }

    void groups_rec(const std::string& label, std::vector<std::vector<TreePtr>>& groups, std::size_t g, int budget,
                    std::vector<TreePtr>& out)
    {
        if (g + 1 == groups.size()) {
            forests(budget, [&](const std::vector<TreePtr>& f) {
                groups[g] = f;
                out.push_back(std::make_shared<const Tree>(Tree{label, groups}));
            });
            return;
        }
        for (int size = 0; size <= budget; ++size)
            forests(size, [&](const std::vector<TreePtr>& f) {
                groups[g] = f;
                groups_rec(label, groups, g + 1, budget - size, out);
            });
    }

    const RankedAlphabet& alphabet_;
    std::map<int, std::vector<TreePtr>> trees_;
};

inline NodeId build_tree(ForestGraph& g, const Tree& t)
{
    NodeId v = g.add_node(Label::parse(t.label));
    for (std::size_t i = 0; i < t.groups.size(); ++i)
        for (const auto& c : t.groups[i]) g.add_edge(v, static_cast<int>(i), build_tree(g, *c));
    return v;
}

}  // namespace detail

/// Every ordered finite forest over `alphabet` with at most `max_nodes`
/// nodes, each exactly once, in order of increasing size.  Arity-0 symbols
/// are leaves; other symbols may have any children, including none.
inline void enum_forests(const RankedAlphabet& alphabet, int max_nodes, const std::function<void(const ForestGraph&)>& emit,
                         int min_nodes = 0)
{
    detail::ForestEnumerator en(alphabet);
    for (int n = min_nodes; n <= max_nodes; ++n)
        en.forests(n, [&](const std::vector<detail::TreePtr>& f) {
            ForestGraph g(alphabet);
            for (const auto& t : f) g.add_root(detail::build_tree(g, *t));
            emit(g);
        });
}

inline std::vector<ForestGraph> all_forests(const RankedAlphabet& alphabet, int max_nodes)
{
    std::vector<ForestGraph> out;
    enum_forests(alphabet, max_nodes, [&](const ForestGraph& g) { out.push_back(g); });
    return out;
}

/// Number of ordered forests with exactly n nodes over `letters` unary
/// letters: Catalan(n) * letters^n.
inline long long unary_forest_count(long long letters, int n)
{
    long long catalan = 1;
    for (int i = 0; i < n; ++i) catalan = catalan * 2 * (2 * i + 1) / (i + 2);
    long long p = 1;
    for (int i = 0; i < n; ++i) p *= letters;
    return catalan * p;
}

}  // namespace forestalg::testkit

#endif  // FORESTALG_TESTKIT_ENUMERATE_HPP
