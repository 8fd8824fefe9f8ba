#ifndef FORESTALG_GRAPH_HPP
#define FORESTALG_GRAPH_HPP

// Plain directed-graph helpers shared by forests, games and the logic module.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace forestalg {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// Successor lists; repeated targets encode parallel edges.
using Adjacency = std::vector<std::vector<NodeId>>;

inline std::vector<bool> reachable_from(const Adjacency& adj, const std::vector<NodeId>& sources)
{
    std::vector<bool> seen(adj.size(), false);
    std::vector<NodeId> stack;
    for (NodeId s : sources)
        if (!seen[s]) {
            seen[s] = true;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

struct SccDecomposition {
    std::vector<int> component;              // node -> component index
    std::vector<std::vector<NodeId>> members;  // in reverse topological order (sinks first)
    std::vector<bool> cyclic;                // component contains a cycle (incl. self-loops)
};

/// Iterative Tarjan.  Components come out sinks first.
inline SccDecomposition strongly_connected_components(const Adjacency& adj)
{
    const auto n = static_cast<NodeId>(adj.size());
    SccDecomposition out;
    out.component.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    std::vector<std::pair<NodeId, std::size_t>> call;
    int counter = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (index[s] >= 0) continue;
        call.emplace_back(s, 0);
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos == 0 && index[v] < 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (pos < adj[v].size()) {
                NodeId w = adj[v][pos++];
                if (index[w] < 0) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<NodeId> comp;
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component[w] = static_cast<int>(out.members.size());
                    comp.push_back(w);
                } while (w != v);
                bool cyc = comp.size() > 1 ||
                           std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
                out.members.push_back(std::move(comp));
                out.cyclic.push_back(cyc);
            }
            NodeId done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return out;
}

/// Sparse class -> count vector, sorted by class.
using ClassCounts = std::vector<std::pair<int, int>>;

/// For every node v, the number of vertices of each class among the strict
/// descendants of v in the unravelling, capped at `cap`.  A class that is
/// reachable from a cycle below v counts as `cap`.  Nodes with class < 0 are
/// not counted.
inline std::vector<ClassCounts> capped_descendant_counts(const Adjacency& adj, const std::vector<int>& cls, int cap)
{
    const std::size_t n = adj.size();
    auto scc = strongly_connected_components(adj);
    std::vector<ClassCounts> counts(n);
    std::vector<std::set<int>> reach_classes(scc.members.size());

    for (std::size_t c = 0; c < scc.members.size(); ++c) {
        auto& rc = reach_classes[c];
        for (NodeId v : scc.members[c]) {
            if (cls[v] >= 0) rc.insert(cls[v]);
            for (NodeId w : adj[v]) {
                auto wc = static_cast<std::size_t>(scc.component[w]);
                if (wc != c) rc.insert(reach_classes[wc].begin(), reach_classes[wc].end());
            }
        }
        if (scc.cyclic[c]) {
            ClassCounts all;
            for (int k : rc) all.emplace_back(k, cap);
            for (NodeId v : scc.members[c]) counts[v] = all;
            continue;
        }
        NodeId v = scc.members[c].front();
        std::map<int, int> acc;
        for (NodeId w : adj[v]) {
            if (cls[w] >= 0) acc[cls[w]] = std::min(cap, acc[cls[w]] + 1);
            for (const auto& [k, x] : counts[w]) acc[k] = std::min(cap, acc[k] + x);
        }
        counts[v].assign(acc.begin(), acc.end());
    }
    return counts;
}

/// Capped count of the vertices of one class.
inline int count_of(const ClassCounts& cc, int cls)
{
    auto it = std::lower_bound(cc.begin(), cc.end(), std::make_pair(cls, 0));
    return (it != cc.end() && it->first == cls) ? it->second : 0;
}

}  // namespace forestalg

#endif  // FORESTALG_GRAPH_HPP
