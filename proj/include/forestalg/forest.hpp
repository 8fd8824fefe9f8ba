#ifndef FORESTALG_FOREST_HPP
#define FORESTALG_FOREST_HPP

// Regular forests with variables, represented as finite rooted multigraphs.
//
// A ForestGraph denotes the (possibly infinite) forest obtained by unravelling
// the graph from its ordered root list.  Each edge carries an edge label k; the
// target is then a k-successor of the source.  Successors sharing an edge label
// are ordered, successors with different edge labels are not.
//
// Variables x0, x1, ... are arity-0 leaf labels.  All operations here are
// functional: inputs are never mutated.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forestalg/graph.hpp"

namespace forestalg {

class ForestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// True for names of the form x<digits>, which are reserved for variables.
inline bool is_variable_name(std::string_view name)
{
    if (name.size() < 2 || name[0] != 'x') return false;
    return std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline int variable_index(std::string_view name) { return std::stoi(std::string(name.substr(1))); }

class RankedAlphabet {
public:
    RankedAlphabet() = default;
    RankedAlphabet(std::initializer_list<std::pair<std::string, int>> symbols)
    {
        for (const auto& [name, arity] : symbols) add(name, arity);
    }

    void add(const std::string& name, int arity)
    {
        if (name.empty()) throw ForestError("empty symbol name");
        if (is_variable_name(name)) throw ForestError("symbol name '" + name + "' is reserved for variables");
        if (arity < 0) throw ForestError("negative arity for symbol '" + name + "'");
        auto it = index_.find(name);
        if (it != index_.end()) {
            if (symbols_[it->second].second != arity)
                throw ForestError("symbol '" + name + "' declared with arities " +
                                  std::to_string(symbols_[it->second].second) + " and " + std::to_string(arity));
            return;
        }
        index_.emplace(name, symbols_.size());
        symbols_.emplace_back(name, arity);
    }

    [[nodiscard]] std::optional<int> arity_of(const std::string& name) const
    {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return symbols_[it->second].second;
    }
    [[nodiscard]] bool contains(const std::string& name) const { return index_.count(name) != 0; }
    [[nodiscard]] const std::vector<std::pair<std::string, int>>& symbols() const { return symbols_; }
    [[nodiscard]] std::size_t size() const { return symbols_.size(); }

    /// Union of two alphabets; throws when a name carries two different arities.
    [[nodiscard]] RankedAlphabet merged(const RankedAlphabet& other) const
    {
        RankedAlphabet out = *this;
        for (const auto& [name, arity] : other.symbols_) out.add(name, arity);
        return out;
    }

    /// Unranked alphabet embedded as a ranked one: every letter has arity 1.
    static RankedAlphabet unranked(const std::vector<std::string>& letters)
    {
        RankedAlphabet out;
        for (const auto& l : letters) out.add(l, 1);
        return out;
    }

    friend bool operator==(const RankedAlphabet& a, const RankedAlphabet& b)
    {
        return std::set(a.symbols_.begin(), a.symbols_.end()) == std::set(b.symbols_.begin(), b.symbols_.end());
    }

private:
    std::vector<std::pair<std::string, int>> symbols_;
    std::map<std::string, std::size_t> index_;
};

struct Label {
    std::string symbol;
    int variable = -1;

    static Label sym(std::string name) { return Label{std::move(name), -1}; }
    static Label var(int i) { return Label{{}, i}; }
    static Label parse(const std::string& text)
    {
        return is_variable_name(text) ? var(variable_index(text)) : sym(text);
    }

    [[nodiscard]] bool is_variable() const { return variable >= 0; }
    [[nodiscard]] std::string text() const { return is_variable() ? "x" + std::to_string(variable) : symbol; }

    friend bool operator==(const Label&, const Label&) = default;
    friend auto operator<=>(const Label&, const Label&) = default;
};

struct Edge {
    int label = 0;
    NodeId target = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Node {
    Label label;
    std::vector<Edge> children;
};

class ForestGraph {
public:
    ForestGraph() = default;
    explicit ForestGraph(RankedAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

    NodeId add_node(Label label)
    {
        nodes_.push_back(Node{std::move(label), {}});
        return static_cast<NodeId>(nodes_.size() - 1);
    }
    NodeId add_node(const std::string& label) { return add_node(Label::parse(label)); }
    void add_edge(NodeId from, int edge_label, NodeId to) { nodes_.at(from).children.push_back(Edge{edge_label, to}); }
    void add_root(NodeId v) { roots_.push_back(v); }
    void set_roots(std::vector<NodeId> roots) { roots_ = std::move(roots); }
    void set_alphabet(RankedAlphabet a) { alphabet_ = std::move(a); }

    [[nodiscard]] const RankedAlphabet& alphabet() const { return alphabet_; }
    [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
    [[nodiscard]] const Node& node(NodeId v) const { return nodes_.at(v); }
    [[nodiscard]] const std::vector<NodeId>& roots() const { return roots_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] bool empty() const { return roots_.empty(); }

    /// Arity of the label of v: the variable/symbol arity, or -1 for unknown symbols.
    [[nodiscard]] int label_arity(NodeId v) const
    {
        const auto& l = nodes_.at(v).label;
        if (l.is_variable()) return 0;
        return alphabet_.arity_of(l.symbol).value_or(-1);
    }

    [[nodiscard]] Adjacency adjacency() const
    {
        Adjacency adj(nodes_.size());
        for (std::size_t v = 0; v < nodes_.size(); ++v)
            for (const auto& e : nodes_[v].children) adj[v].push_back(e.target);
        return adj;
    }

    [[nodiscard]] std::vector<bool> reachable() const { return reachable_from(adjacency(), roots_); }

    /// Number m of variables x0..x(m-1): one more than the largest reachable variable index.
    [[nodiscard]] int arity() const
    {
        int m = 0;
        auto reach = reachable();
        for (std::size_t v = 0; v < nodes_.size(); ++v)
            if (reach[v] && nodes_[v].label.is_variable()) m = std::max(m, nodes_[v].label.variable + 1);
        return m;
    }
    [[nodiscard]] bool is_closed() const { return arity() == 0; }

    /// Children of v, stably sorted by edge label.
    [[nodiscard]] std::vector<Edge> sorted_children(NodeId v) const
    {
        auto ch = nodes_.at(v).children;
        std::stable_sort(ch.begin(), ch.end(), [](const Edge& a, const Edge& b) { return a.label < b.label; });
        return ch;
    }

    /// Copy keeping only nodes reachable from the roots, renumbered in discovery order.
    [[nodiscard]] ForestGraph trimmed() const
    {
        std::vector<NodeId> order;
        std::vector<NodeId> remap(nodes_.size(), kNoNode);
        std::vector<NodeId> stack(roots_.rbegin(), roots_.rend());
        // preorder so that node ids follow a left-to-right traversal
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            if (remap[v] != kNoNode) continue;
            remap[v] = static_cast<NodeId>(order.size());
            order.push_back(v);
            const auto& ch = nodes_[v].children;
            for (auto it = ch.rbegin(); it != ch.rend(); ++it)
                if (remap[it->target] == kNoNode) stack.push_back(it->target);
        }
        ForestGraph out(alphabet_);
        for (NodeId v : order) out.add_node(nodes_[v].label);
        for (NodeId v : order)
            for (const auto& e : nodes_[v].children) out.add_edge(remap[v], e.label, remap[e.target]);
        for (NodeId r : roots_) out.add_root(remap[r]);
        return out;
    }

    /// Appends all nodes of other (shifted) without touching roots; returns the id offset.
    NodeId absorb(const ForestGraph& other)
    {
        alphabet_ = alphabet_.merged(other.alphabet_);
        auto offset = static_cast<NodeId>(nodes_.size());
        for (const auto& n : other.nodes_) {
            Node copy = n;
            for (auto& e : copy.children) e.target += offset;
            nodes_.push_back(std::move(copy));
        }
        return offset;
    }

    Node& mutable_node(NodeId v) { return nodes_.at(v); }

private:
    RankedAlphabet alphabet_;
    std::vector<Node> nodes_;
    std::vector<NodeId> roots_;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
    UnknownSymbol,
    EdgeLabelExceedsArity,
    VariableHasChildren,
    MissingVariable,
    VariableReachableFromCycle,
    RootIsVariable,
    DanglingNode,
};

inline const char* to_string(ViolationKind k)
{
    switch (k) {
    case ViolationKind::UnknownSymbol: return "unknown symbol";
    case ViolationKind::EdgeLabelExceedsArity: return "edge label exceeds arity";
    case ViolationKind::VariableHasChildren: return "variable has children";
    case ViolationKind::MissingVariable: return "missing variable";
    case ViolationKind::VariableReachableFromCycle: return "variable reachable from cycle";
    case ViolationKind::RootIsVariable: return "root is a variable";
    case ViolationKind::DanglingNode: return "dangling node reference";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    NodeId node = kNoNode;
    std::string message;
};

inline std::vector<Violation> validate(const ForestGraph& g)
{
    std::vector<Violation> out;
    const auto n = static_cast<NodeId>(g.size());
    for (NodeId r : g.roots())
        if (r < 0 || r >= n) {
            out.push_back({ViolationKind::DanglingNode, r, "root " + std::to_string(r) + " does not exist"});
            return out;
        }
    for (NodeId v = 0; v < n; ++v)
        for (const auto& e : g.node(v).children)
            if (e.target < 0 || e.target >= n) {
                out.push_back({ViolationKind::DanglingNode, v,
                               "node " + std::to_string(v) + " has an edge to missing node " + std::to_string(e.target)});
                return out;
            }

    auto reach = g.reachable();
    int max_var = -1;
    std::set<int> seen_vars;
    for (NodeId v = 0; v < n; ++v) {
        if (!reach[v]) continue;
        const auto& node = g.node(v);
        if (node.label.is_variable()) {
            seen_vars.insert(node.label.variable);
            max_var = std::max(max_var, node.label.variable);
            if (!node.children.empty())
                out.push_back({ViolationKind::VariableHasChildren, v,
                               "node " + std::to_string(v) + " labelled " + node.label.text() + " has children"});
            continue;
        }
        int ar = g.label_arity(v);
        if (ar < 0) {
            out.push_back({ViolationKind::UnknownSymbol, v,
                           "node " + std::to_string(v) + " has unknown symbol '" + node.label.symbol + "'"});
            continue;
        }
        for (const auto& e : node.children)
            if (e.label < 0 || e.label >= ar)
                out.push_back({ViolationKind::EdgeLabelExceedsArity, v,
                               "edge label " + std::to_string(e.label) + " at node " + std::to_string(v) + " (" +
                                   node.label.symbol + ", arity " + std::to_string(ar) + ")"});
    }
    for (int i = 0; i <= max_var; ++i)
        if (!seen_vars.count(i))
            out.push_back({ViolationKind::MissingVariable, kNoNode, "variable x" + std::to_string(i) + " does not occur"});

    for (NodeId r : g.roots())
        if (g.node(r).label.is_variable())
            out.push_back({ViolationKind::RootIsVariable, r, "root " + std::to_string(r) + " is a variable"});

    // A variable below a reachable cycle occurs infinitely often in the unravelling.
    auto adj = g.adjacency();
    auto scc = strongly_connected_components(adj);
    std::vector<NodeId> cyclic;
    for (NodeId v = 0; v < n; ++v)
        if (reach[v] && scc.cyclic[scc.component[v]]) cyclic.push_back(v);
    if (!cyclic.empty()) {
        auto below = reachable_from(adj, cyclic);
        for (NodeId v = 0; v < n; ++v)
            if (below[v] && g.node(v).label.is_variable())
                out.push_back({ViolationKind::VariableReachableFromCycle, v,
                               "variable " + g.node(v).label.text() + " at node " + std::to_string(v) +
                                   " is reachable from a cycle"});
    }
    return out;
}

inline bool is_valid(const ForestGraph& g) { return validate(g).empty(); }

inline void require_valid(const ForestGraph& g, const std::string& what = "forest")
{
    auto v = validate(g);
    if (!v.empty()) throw ForestError("invalid " + what + ": " + v.front().message);
}

// ---------------------------------------------------------------------------
// Monad operations

/// Disjoint union s + t; roots of t follow those of s.
inline ForestGraph hsum(const ForestGraph& s, const ForestGraph& t)
{
    ForestGraph out = s;
    try {
        NodeId off = out.absorb(t);
        for (NodeId r : t.roots()) out.add_root(r + off);
    } catch (const ForestError& e) {
        throw ForestError(std::string("alphabet mismatch in sum: ") + e.what());
    }
    return out;
}

inline ForestGraph empty_forest(RankedAlphabet alphabet = {}) { return ForestGraph(std::move(alphabet)); }

/// Simultaneous substitution: every x_i leaf with a replacement is replaced by
/// the whole replacement forest.  Each incoming edge of the leaf is redirected
/// to all roots of the replacement, in root order, keeping the edge label.
/// Roots labelled x_i are replaced by the replacement's roots.
inline ForestGraph substitute_all(const ForestGraph& s, const std::vector<std::optional<ForestGraph>>& repl)
{
    ForestGraph out(s.alphabet());
    const auto n = static_cast<NodeId>(s.size());
    std::vector<std::vector<NodeId>> replacement_roots(repl.size());
    for (NodeId v = 0; v < n; ++v) out.add_node(s.node(v).label);
    for (std::size_t i = 0; i < repl.size(); ++i) {
        if (!repl[i]) continue;
        NodeId off = out.absorb(*repl[i]);
        for (NodeId r : repl[i]->roots()) replacement_roots[i].push_back(r + off);
    }
    auto expand = [&](NodeId target, auto&& emit) {
        const auto& l = s.node(target).label;
        if (l.is_variable() && static_cast<std::size_t>(l.variable) < repl.size() && repl[l.variable]) {
            for (NodeId r : replacement_roots[l.variable]) emit(r);
        } else {
            emit(target);
        }
    };
    for (NodeId v = 0; v < n; ++v)
        for (const auto& e : s.node(v).children)
            expand(e.target, [&](NodeId t) { out.add_edge(v, e.label, t); });
    for (NodeId r : s.roots()) expand(r, [&](NodeId t) { out.add_root(t); });
    return out.trimmed();
}

inline ForestGraph substitute(const ForestGraph& s, int i, const ForestGraph& t)
{
    if (i < 0 || i >= s.arity())
        throw ForestError("variable x" + std::to_string(i) + " out of range (arity " + std::to_string(s.arity()) + ")");
    std::vector<std::optional<ForestGraph>> repl(static_cast<std::size_t>(i) + 1);
    repl[i] = t;
    return substitute_all(s, repl);
}

/// The singleton forest a(x0, ..., x(m-1)) with one i-successor x_i per i < ar(a).
inline ForestGraph sing(const RankedAlphabet& alphabet, const std::string& a)
{
    auto ar = alphabet.arity_of(a);
    if (!ar) throw ForestError("unknown symbol '" + a + "'");
    ForestGraph g(alphabet);
    NodeId root = g.add_node(Label::sym(a));
    g.add_root(root);
    for (int i = 0; i < *ar; ++i) g.add_edge(root, i, g.add_node(Label::var(i)));
    return g;
}

/// A forest whose vertex labels are themselves forests (an element of FF A).
/// Nodes labelled by a forest of arity r may only have edge labels < r.
/// Outer variables are represented by nodes with `variable >= 0`.
struct NestedForest {
    struct NestedNode {
        ForestGraph label;
        int variable = -1;
        std::vector<Edge> children;
    };
    std::vector<NestedNode> nodes;
    std::vector<NodeId> roots;

    NodeId add(ForestGraph label)
    {
        nodes.push_back(NestedNode{std::move(label), -1, {}});
        return static_cast<NodeId>(nodes.size() - 1);
    }
    NodeId add_variable(int i)
    {
        nodes.push_back(NestedNode{{}, i, {}});
        return static_cast<NodeId>(nodes.size() - 1);
    }
    void add_edge(NodeId from, int edge_label, NodeId to) { nodes.at(from).children.push_back(Edge{edge_label, to}); }

    [[nodiscard]] Adjacency adjacency() const
    {
        Adjacency adj(nodes.size());
        for (std::size_t v = 0; v < nodes.size(); ++v)
            for (const auto& e : nodes[v].children) adj[v].push_back(e.target);
        return adj;
    }
};

/// Flattening of a finite nested forest: every variable x_k inside the label
/// forest of v is replaced by the sum of the flattened k-successors of v.
inline ForestGraph flatten(const NestedForest& s, const RankedAlphabet& alphabet)
{
    auto scc = strongly_connected_components(s.adjacency());
    for (bool c : scc.cyclic)
        if (c) throw ForestError("flatten requires a finite nested forest");

    std::vector<std::optional<ForestGraph>> memo(s.nodes.size());
    auto flat_tree = [&](auto&& self, NodeId v) -> const ForestGraph& {
        if (memo[v]) return *memo[v];
        const auto& node = s.nodes[v];
        if (node.variable >= 0) {
            if (!node.children.empty()) throw ForestError("outer variable with children in nested forest");
            ForestGraph g(alphabet);
            g.add_root(g.add_node(Label::var(node.variable)));
            memo[v] = std::move(g);
            return *memo[v];
        }
        int ar = node.label.arity();
        std::vector<std::optional<ForestGraph>> repl(static_cast<std::size_t>(ar));
        for (auto& r : repl) r = ForestGraph(alphabet);
        for (const auto& e : node.children) {
            if (e.label < 0 || e.label >= ar)
                throw ForestError("edge label " + std::to_string(e.label) + " exceeds arity " + std::to_string(ar) +
                                  " of nested label");
            repl[e.label] = hsum(*repl[e.label], self(self, e.target));
        }
        ForestGraph label = node.label;
        label.set_alphabet(alphabet.merged(label.alphabet()));
        memo[v] = substitute_all(label, repl);
        return *memo[v];
    };
    ForestGraph out(alphabet);
    for (NodeId r : s.roots) out = hsum(out, flat_tree(flat_tree, r));
    return out.trimmed();
}

/// The tree s|_v rooted at v.
inline ForestGraph subtree(const ForestGraph& g, NodeId v)
{
    if (v < 0 || static_cast<std::size_t>(v) >= g.size()) throw ForestError("unknown node " + std::to_string(v));
    ForestGraph out = g;
    out.set_roots({v});
    return out.trimmed();
}

/// The forest of successors of v, grouped by edge label ascending.
inline ForestGraph successor_forest(const ForestGraph& g, NodeId v)
{
    if (v < 0 || static_cast<std::size_t>(v) >= g.size()) throw ForestError("unknown node " + std::to_string(v));
    ForestGraph out = g;
    std::vector<NodeId> roots;
    for (const auto& e : g.sorted_children(v)) roots.push_back(e.target);
    out.set_roots(std::move(roots));
    return out.trimmed();
}

// ---------------------------------------------------------------------------
// Equality of denoted forests and bisimilarity

namespace detail {

/// Coarsest partition stable under `signature`, starting from the label partition.
template <class Signature>
std::vector<int> refine(const ForestGraph& g, Signature&& signature)
{
    const std::size_t n = g.size();
    std::vector<int> cls(n);
    {
        std::map<Label, int> ids;
        for (std::size_t v = 0; v < n; ++v) cls[v] = ids.try_emplace(g.node(v).label, static_cast<int>(ids.size())).first->second;
    }
    std::size_t count = 0;
    for (;;) {
        std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> ids;
        std::vector<int> next(n);
        for (std::size_t v = 0; v < n; ++v) {
            auto key = std::make_pair(cls[v], signature(static_cast<NodeId>(v), cls));
            next[v] = ids.try_emplace(std::move(key), static_cast<int>(ids.size())).first->second;
        }
        cls = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }
    return cls;
}

}  // namespace detail

/// Minimal graph with the same unravelling, numbered by a left-to-right
/// traversal, plus a textual key.  Two graphs denote the same forest iff
/// their keys agree.
struct CanonicalForm {
    ForestGraph graph;
    std::string key;
};

inline CanonicalForm canonical_form(const ForestGraph& input)
{
    ForestGraph g = input.trimmed();
    auto cls = detail::refine(g, [&](NodeId v, const std::vector<int>& c) {
        std::vector<std::pair<int, int>> sig;
        for (const auto& e : g.sorted_children(v)) sig.emplace_back(e.label, c[e.target]);
        return sig;
    });
    std::map<int, NodeId> rep;
    for (std::size_t v = 0; v < g.size(); ++v) rep.try_emplace(cls[v], static_cast<NodeId>(v));

    ForestGraph q(g.alphabet());
    std::map<int, NodeId> num;
    std::vector<int> order;
    std::vector<int> queue;
    auto visit = [&](int c) {
        if (num.count(c)) return;
        num[c] = q.add_node(g.node(rep[c]).label);
        order.push_back(c);
        queue.push_back(c);
    };
    for (NodeId r : g.roots()) visit(cls[r]);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int c = queue[head];
        for (const auto& e : g.sorted_children(rep[c])) visit(cls[e.target]);
    }
    std::ostringstream key;
    key << "roots:";
    for (NodeId r : g.roots()) {
        q.add_root(num[cls[r]]);
        key << num[cls[r]] << ',';
    }
    for (int c : order) {
        NodeId from = num[c];
        key << ';' << from << '=' << g.node(rep[c]).label.text() << '[';
        for (const auto& e : g.sorted_children(rep[c])) {
            q.add_edge(from, e.label, num[cls[e.target]]);
            key << e.label << ':' << num[cls[e.target]] << ',';
        }
        key << ']';
    }
    return CanonicalForm{std::move(q), key.str()};
}

/// True iff both graphs unravel to the same (ordered) forest.
inline bool same_forest(const ForestGraph& a, const ForestGraph& b)
{
    return canonical_form(a).key == canonical_form(b).key;
}

/// Bisimilarity of the unravellings; every component of one forest must be
/// bisimilar to some component of the other.  Successor order is ignored.
inline bool bisimilar(const ForestGraph& s, const ForestGraph& t)
{
    if (!s.is_closed() || !t.is_closed()) throw ForestError("bisimilar: forests must not contain variables");
    ForestGraph u = s;
    NodeId off = u.absorb(t);
    auto cls = detail::refine(u, [&](NodeId v, const std::vector<int>& c) {
        std::set<std::pair<int, int>> sig;
        for (const auto& e : u.node(v).children) sig.emplace(e.label, c[e.target]);
        return std::vector<std::pair<int, int>>(sig.begin(), sig.end());
    });
    std::set<int> left, right;
    for (NodeId r : s.roots()) left.insert(cls[r]);
    for (NodeId r : t.roots()) right.insert(cls[r + off]);
    return left == right;
}

}  // namespace forestalg

#endif  // FORESTALG_FOREST_HPP
