#ifndef FORESTALG_FOREST_IO_HPP
#define FORESTALG_FOREST_IO_HPP

// Forest file format (JSON) and the term notation for finite forests,
// e.g. "a(b + c, 0, b) + b".

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "forestalg/forest.hpp"

namespace forestalg {

using json = nlohmann::json;

inline RankedAlphabet alphabet_from_json(const json& j)
{
    RankedAlphabet a;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2) throw ForestError("alphabet entries must be [name, arity]");
        a.add(entry[0].get<std::string>(), entry[1].get<int>());
    }
    return a;
}

inline json alphabet_to_json(const RankedAlphabet& a)
{
    json out = json::array();
    for (const auto& [name, arity] : a.symbols()) out.push_back(json::array({name, arity}));
    return out;
}

inline ForestGraph forest_from_json(const json& j)
{
    try {
        ForestGraph g(j.contains("alphabet") ? alphabet_from_json(j.at("alphabet")) : RankedAlphabet{});
        std::map<long long, NodeId> ids;
        for (const auto& n : j.at("nodes")) {
            auto id = n.at("id").get<long long>();
            if (ids.count(id)) throw ForestError("duplicate node id " + std::to_string(id));
            ids[id] = g.add_node(Label::parse(n.at("label").get<std::string>()));
        }
        auto lookup = [&](long long id) {
            auto it = ids.find(id);
            if (it == ids.end()) throw ForestError("reference to unknown node id " + std::to_string(id));
            return it->second;
        };
        for (const auto& n : j.at("nodes")) {
            NodeId from = ids[n.at("id").get<long long>()];
            if (!n.contains("children")) continue;
            for (const auto& e : n.at("children")) {
                if (!e.is_array() || e.size() != 2) throw ForestError("children entries must be [edgeLabel, target]");
                g.add_edge(from, e[0].get<int>(), lookup(e[1].get<long long>()));
            }
        }
        for (const auto& r : j.at("roots")) g.add_root(lookup(r.get<long long>()));
        return g;
    } catch (const json::exception& e) {
        throw ForestError(std::string("malformed forest JSON: ") + e.what());
    }
}

inline json forest_to_json(const ForestGraph& g)
{
    json nodes = json::array();
    for (std::size_t v = 0; v < g.size(); ++v) {
        json ch = json::array();
        for (const auto& e : g.node(static_cast<NodeId>(v)).children) ch.push_back(json::array({e.label, e.target}));
        nodes.push_back({{"id", v}, {"label", g.node(static_cast<NodeId>(v)).label.text()}, {"children", ch}});
    }
    return {{"alphabet", alphabet_to_json(g.alphabet())}, {"roots", g.roots()}, {"nodes", nodes}};
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ForestError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ForestError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline ForestGraph load_forest(const std::string& path) { return forest_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Term notation

namespace detail {

class TermParser {
public:
    TermParser(std::string_view text, const RankedAlphabet* alphabet) : text_(text), alphabet_(alphabet) {}

    ForestGraph run()
    {
        auto roots = forest();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        g_.set_roots(roots);
        if (alphabet_) {
            g_.set_alphabet(*alphabet_);
        } else {
            RankedAlphabet a;
            for (const auto& name : order_) a.add(name, inferred_[name]);
            g_.set_alphabet(a);
        }
        return g_;
    }

private:
    std::vector<NodeId> forest()
    {
        std::vector<NodeId> roots;
        do {
            skip_ws();
            auto name = ident();
            if (name == "0") continue;
            roots.push_back(tree(name));
        } while (eat('+'));
        return roots;
    }

    NodeId tree(const std::string& name)
    {
        Label label = Label::parse(name);
        NodeId v = g_.add_node(label);
        int groups = 0;
        if (eat('(')) {
            if (label.is_variable()) fail("variable " + name + " cannot have children");
            do {
                for (NodeId c : forest()) g_.add_edge(v, groups, c);
                ++groups;
            } while (eat(','));
            if (!eat(')')) fail("expected ')'");
        }
        if (label.is_variable()) return v;
        if (alphabet_) {
            auto ar = alphabet_->arity_of(name);
            if (!ar) fail("unknown symbol '" + name + "'");
            if (groups > *ar) fail("symbol '" + name + "' has arity " + std::to_string(*ar));
        } else {
            if (!inferred_.count(name)) order_.push_back(name);
            inferred_[name] = std::max({inferred_[name], groups, 1});
        }
        return v;
    }

    std::string ident()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                        text_[pos_] == '\''))
            ++pos_;
        if (start == pos_) fail("expected a symbol");
        return std::string(text_.substr(start, pos_ - start));
    }

    bool eat(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ForestError("term syntax error at position " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view text_;
    const RankedAlphabet* alphabet_;
    std::size_t pos_ = 0;
    ForestGraph g_;
    std::map<std::string, int> inferred_;
    std::vector<std::string> order_;
};

}  // namespace detail

/// Parses term notation.  Without an alphabet, each symbol gets arity
/// max(1, number of argument groups it is used with).
inline ForestGraph parse_term(std::string_view text) { return detail::TermParser(text, nullptr).run(); }
inline ForestGraph parse_term(std::string_view text, const RankedAlphabet& alphabet)
{
    return detail::TermParser(text, &alphabet).run();
}

/// Term notation of a finite forest; throws on cyclic graphs.
inline std::string to_term(const ForestGraph& g)
{
    auto scc = strongly_connected_components(g.adjacency());
    auto reach = g.reachable();
    for (std::size_t v = 0; v < g.size(); ++v)
        if (reach[v] && scc.cyclic[scc.component[v]]) throw ForestError("to_term: forest is infinite");
    std::ostringstream out;
    auto tree = [&](auto&& self, NodeId v) -> void {
        const auto& node = g.node(v);
        out << node.label.text();
        if (node.children.empty()) return;
        int last = 0;
        for (const auto& e : node.children) last = std::max(last, e.label);
        out << '(';
        for (int i = 0; i <= last; ++i) {
            if (i) out << ", ";
            bool first = true;
            for (const auto& e : node.children) {
                if (e.label != i) continue;
                if (!first) out << " + ";
                first = false;
                self(self, e.target);
            }
            if (first) out << '0';
        }
        out << ')';
    };
    if (g.roots().empty()) return "0";
    for (std::size_t i = 0; i < g.roots().size(); ++i) {
        if (i) out << " + ";
        tree(tree, g.roots()[i]);
    }
    return out.str();
}

}  // namespace forestalg

#endif  // FORESTALG_FOREST_IO_HPP
