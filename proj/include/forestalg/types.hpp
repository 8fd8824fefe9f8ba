#ifndef FORESTALG_TYPES_HPP
#define FORESTALG_TYPES_HPP

// Counting types tp_k^m (trees) and Tp_k^m (forests), counting-bisimulation
// equivalence, and the characteristic formulas chi.

#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forestalg/forest.hpp"
#include "forestalg/formula.hpp"
#include "forestalg/graph.hpp"

namespace forestalg {

/// A type of rank r.  Tree types carry the root label; forest types do not.
/// theta maps each rank-(r-1) subtype to its capped multiplicity 1..k
/// (the set {(l, sigma) : l <= count}).
struct TypeNode {
    int rank = 0;
    bool forest = false;
    std::string label;
    std::vector<std::pair<int, int>> theta;  // (subtype id, count), sorted by id

    friend auto operator<=>(const TypeNode&, const TypeNode&) = default;
};

/// Content-addressed interning of the types for one counting bound k.
/// Equal types get equal ids.  Safe for concurrent use.
class TypeTable {
public:
    explicit TypeTable(int k) : k_(k)
    {
        if (k < 1) throw std::invalid_argument("counting bound k must be at least 1");
    }

    [[nodiscard]] int k() const { return k_; }

    int intern(TypeNode node)
    {
        std::lock_guard lock(mutex_);
        auto [it, fresh] = ids_.try_emplace(node, static_cast<int>(nodes_.size()));
        if (fresh) nodes_.push_back(std::move(node));
        return it->second;
    }

    [[nodiscard]] TypeNode get(int id) const
    {
        std::lock_guard lock(mutex_);
        return nodes_.at(id);
    }

    [[nodiscard]] std::size_t size() const
    {
        std::lock_guard lock(mutex_);
        return nodes_.size();
    }

    [[nodiscard]] nlohmann::json to_json(int id) const
    {
        TypeNode t = get(id);
        nlohmann::json theta = nlohmann::json::array();
        for (auto [sub, count] : t.theta) theta.push_back({{"count", count}, {"type", to_json(sub)}});
        nlohmann::json out;
        if (!t.forest) {
            if (t.rank == 0) return t.label;
            out["label"] = t.label;
        }
        out["theta"] = theta;
        return out;
    }

    /// Compact text: a{2*b, 1*c{...}} for trees, {..} for forests.
    [[nodiscard]] std::string to_text(int id) const
    {
        TypeNode t = get(id);
        if (!t.forest && t.rank == 0) return t.label;
        std::string s = t.forest ? "" : t.label;
        s += '{';
        for (std::size_t i = 0; i < t.theta.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(t.theta[i].second) + '*' + to_text(t.theta[i].first);
        }
        return s + '}';
    }

private:
    int k_;
    mutable std::mutex mutex_;
    std::map<TypeNode, int> ids_;
    std::vector<TypeNode> nodes_;
};

/// For every node of g, the ids of tp_k^r at that node for r = 0..m.
inline std::vector<std::vector<int>> all_tree_types(TypeTable& table, const ForestGraph& g, int m)
{
    if (!g.is_closed()) throw ForestError("types: forest must not contain variables");
    const std::size_t n = g.size();
    auto adj = g.adjacency();
    std::vector<std::vector<int>> out(static_cast<std::size_t>(m) + 1, std::vector<int>(n));
    for (std::size_t v = 0; v < n; ++v)
        out[0][v] = table.intern({0, false, g.node(static_cast<NodeId>(v)).label.text(), {}});
    for (int r = 1; r <= m; ++r) {
        auto counts = capped_descendant_counts(adj, out[r - 1], table.k());
        for (std::size_t v = 0; v < n; ++v)
            out[r][v] = table.intern({r, false, g.node(static_cast<NodeId>(v)).label.text(), counts[v]});
    }
    return out;
}

/// tp_k^m of the subtree at v.
inline int tp(TypeTable& table, const ForestGraph& g, NodeId v, int m)
{
    return all_tree_types(table, g, m)[m].at(v);
}

/// Tp_k^m of the whole forest; Tp^0 is one constant type.
inline int Tp(TypeTable& table, const ForestGraph& g, int m)
{
    if (m == 0) return table.intern({0, true, {}, {}});
    auto types = all_tree_types(table, g, m - 1);
    const auto& sub = types[m - 1];
    auto counts = capped_descendant_counts(g.adjacency(), sub, table.k());
    std::map<int, int> theta;
    for (NodeId r : g.roots()) {
        theta[sub[r]] = std::min(table.k(), theta[sub[r]] + 1);
        for (auto [s, c] : counts[r]) theta[s] = std::min(table.k(), theta[s] + c);
    }
    return table.intern({m, true, {}, {theta.begin(), theta.end()}});
}

/// s ~_k^m t
inline bool equiv(const ForestGraph& s, const ForestGraph& t, int k, int m)
{
    TypeTable table(k);
    return Tp(table, s, m) == Tp(table, t, m);
}

/// Tree types of rank r realised at some node of one of the graphs.
inline std::set<int> realized_types(TypeTable& table, const std::vector<ForestGraph>& corpus, int r)
{
    std::set<int> out;
    for (const auto& g : corpus) {
        auto types = all_tree_types(table, g, r);
        out.insert(types[r].begin(), types[r].end());
    }
    return out;
}

/// Characteristic formulas.  For a type tau of rank m, chi(tau) holds exactly
/// on the trees (forests) of type tau, provided `universe[r]` contains every
/// rank-r tree type occurring in the structure being checked (r < m).
class ChiBuilder {
public:
    ChiBuilder(const TypeTable& table, std::vector<std::set<int>> universe)
        : table_(table), universe_(std::move(universe))
    {
    }

    FormulaPtr chi(int id)
    {
        auto it = memo_.find(id);
        if (it != memo_.end()) return it->second;
        TypeNode t = table_.get(id);
        std::vector<FormulaPtr> parts;
        if (!t.forest) parts.push_back(fml::atom(t.label));
        if (t.rank > 0) {
            std::map<int, int> theta(t.theta.begin(), t.theta.end());
            std::set<int> subs;
            if (static_cast<std::size_t>(t.rank - 1) < universe_.size()) subs = universe_[t.rank - 1];
            for (auto [s, c] : t.theta) subs.insert(s);
            for (int s : subs) {
                int count = theta.count(s) ? theta[s] : 0;
                auto sub = chi(s);
                for (int l = 1; l <= table_.k(); ++l)
                    parts.push_back(l <= count ? fml::exists(l, sub) : fml::neg(fml::exists(l, sub)));
            }
        }
        auto f = fml::conj(std::move(parts));
        memo_.emplace(id, f);
        return f;
    }

private:
    const TypeTable& table_;
    std::vector<std::set<int>> universe_;
    std::map<int, FormulaPtr> memo_;
};

}  // namespace forestalg

#endif  // FORESTALG_TYPES_HPP
