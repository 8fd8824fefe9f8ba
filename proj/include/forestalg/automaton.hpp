#ifndef FORESTALG_AUTOMATON_HPP
#define FORESTALG_AUTOMATON_HPP

// Nondeterministic parity automata over unranked forests and their
// membership games.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "forestalg/forest.hpp"
#include "forestalg/forest_io.hpp"
#include "forestalg/nfa.hpp"
#include "forestalg/parity_game.hpp"

namespace forestalg {

class AutomatonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per edge label, an NFA over automaton states constraining the sequence of
/// child states.  An edge label without an entry admits only the empty sequence.
struct TransitionItem {
    std::map<int, Nfa> children;

    [[nodiscard]] const Nfa* constraint(int edge_label) const
    {
        auto it = children.find(edge_label);
        return it == children.end() ? nullptr : &it->second;
    }
    [[nodiscard]] bool accepts_no_children() const
    {
        for (const auto& [label, nfa] : children)
            if (!nfa.accepts_empty()) return false;
        return true;
    }
};

struct ParityForestAutomaton {
    std::vector<std::string> states;
    std::vector<int> priority;
    Nfa root;
    std::set<std::string> alphabet;  // symbol names and variables (x0, x1, ...)
    std::map<std::pair<int, std::string>, std::vector<TransitionItem>> delta;

    [[nodiscard]] int num_states() const { return static_cast<int>(states.size()); }

    [[nodiscard]] int state_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name) return static_cast<int>(i);
        throw AutomatonError("unknown automaton state '" + name + "'");
    }

    [[nodiscard]] const std::vector<TransitionItem>& items(int q, const std::string& symbol) const
    {
        static const std::vector<TransitionItem> none;
        auto it = delta.find({q, symbol});
        return it == delta.end() ? none : it->second;
    }

    void add_item(int q, const std::string& symbol, TransitionItem item)
    {
        alphabet.insert(symbol);
        delta[{q, symbol}].push_back(std::move(item));
    }

    /// One state of priority 0 that accepts every forest over `symbols`.
    static ParityForestAutomaton universal(const RankedAlphabet& symbols, int max_variables = 0)
    {
        ParityForestAutomaton a;
        a.states = {"q"};
        a.priority = {0};
        a.root = Nfa::universal(1);
        for (const auto& [name, ar] : symbols.symbols()) {
            TransitionItem item;
            for (int i = 0; i < ar; ++i) item.children.emplace(i, Nfa::universal(1));
            a.add_item(0, name, item);
        }
        for (int i = 0; i < max_variables; ++i) a.add_item(0, "x" + std::to_string(i), {});
        return a;
    }
};

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline std::string state_name(const json& j)
{
    return j.is_string() ? j.get<std::string>() : j.dump();
}

inline Nfa nfa_from_json(const json& j, const ParityForestAutomaton& aut, std::map<std::string, Nfa>* shared = nullptr,
                         const json* shared_defs = nullptr)
{
    auto letter = [&](const std::string& name) { return aut.state_index(name); };
    if (j.is_string() && !j.get<std::string>().empty() && j.get<std::string>()[0] == '@') {
        // reference to a shared definition under "nfas"
        std::string name = j.get<std::string>().substr(1);
        if (shared) {
            auto it = shared->find(name);
            if (it != shared->end()) return it->second;
        }
        if (!shared_defs || !shared_defs->contains(name)) throw AutomatonError("unknown shared NFA '" + name + "'");
        Nfa n = nfa_from_json(shared_defs->at(name), aut);
        if (shared) shared->emplace(name, n);
        return n;
    }
    if (j.is_string()) {
        try {
            return compile_regex(j.get<std::string>(), letter);
        } catch (const NfaError& e) {
            throw AutomatonError(e.what());
        }
    }
    Nfa n;
    std::map<std::string, int> ids;
    for (const auto& s : j.at("states")) ids[state_name(s)] = n.add_state();
    auto id = [&](const json& s) {
        auto it = ids.find(state_name(s));
        if (it == ids.end()) throw AutomatonError("unknown NFA state " + state_name(s));
        return it->second;
    };
    for (const auto& s : j.at("initial")) n.initial.push_back(id(s));
    for (const auto& s : j.at("final")) n.final[id(s)] = true;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw AutomatonError("NFA edges must be [from, letter, to]");
        n.add_transition(id(e[0]), letter(state_name(e[1])), id(e[2]));
    }
    return n;
}

}  // namespace detail

/// Reads an automaton.  NFAs may be given as objects, as regular
/// expressions over state names, or as "@name" references to entries of a
/// top-level "nfas" object; delta entries may use "symbols" to share items
/// between several symbols.
inline ParityForestAutomaton automaton_from_json(const json& j)
{
    try {
        ParityForestAutomaton a;
        for (const auto& s : j.at("states")) a.states.push_back(detail::state_name(s));
        a.priority.assign(a.states.size(), 0);
        if (j.contains("priority"))
            for (const auto& [name, p] : j.at("priority").items()) a.priority[a.state_index(name)] = p.get<int>();
        std::map<std::string, Nfa> shared;
        const json* defs = j.contains("nfas") ? &j.at("nfas") : nullptr;
        a.root = detail::nfa_from_json(j.at("root"), a, &shared, defs);
        if (j.contains("alphabet"))
            for (const auto& s : j.at("alphabet")) a.alphabet.insert(s.get<std::string>());
        for (const auto& entry : j.at("delta")) {
            int q = a.state_index(detail::state_name(entry.at("state")));
            std::vector<std::string> symbols;
            if (entry.contains("symbol")) symbols.push_back(entry.at("symbol").get<std::string>());
            if (entry.contains("symbols"))
                for (const auto& s : entry.at("symbols")) symbols.push_back(s.get<std::string>());
            std::vector<TransitionItem> items;
            for (const auto& it : entry.at("items")) {
                TransitionItem item;
                for (const auto& [label, nfa] : it.items()) item.children.emplace(std::stoi(label), detail::nfa_from_json(nfa, a, &shared, defs));
                items.push_back(std::move(item));
            }
            for (const auto& s : symbols) {
                if (items.empty()) a.alphabet.insert(s);
                for (const auto& item : items) a.add_item(q, s, item);
            }
        }
        return a;
    } catch (const json::exception& e) {
        throw AutomatonError(std::string("malformed automaton JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Membership game

enum class GameEncoding {
    Auto,        // full assignments unless they get numerous, then interleaved
    Full,        // Verifier commits to a complete child-state assignment
    Interleaved  // Verifier commits to child states one at a time
};

namespace detail {

class MembershipGameBuilder {
public:
    MembershipGameBuilder(const ParityForestAutomaton& aut, const ForestGraph& g, GameEncoding enc,
                          std::size_t assignment_cap)
        : aut_(aut), g_(g), enc_(enc), cap_(assignment_cap)
    {
    }

    ParityGame build()
    {
        auto reach = g_.reachable();
        for (std::size_t v = 0; v < g_.size(); ++v) {
            if (!reach[v]) continue;
            auto text = g_.node(static_cast<NodeId>(v)).label.text();
            if (!aut_.alphabet.count(text)) throw AutomatonError("alphabet mismatch: label '" + text + "' not in automaton alphabet");
        }
        int initial = game_.add_position(Player::Verifier, 0);
        Sequence roots;
        roots.groups.push_back({&aut_.root, g_.roots()});
        expand_sequence(initial, roots, /*key=*/{-1, -1, -1});
        while (!work_.empty()) {
            auto [v, q] = work_.back();
            work_.pop_back();
            expand_state(v, q);
        }
        return std::move(game_);
    }

private:
    struct Sequence {
        // consecutive groups of children, each constrained by one NFA (null: must be empty)
        std::vector<std::pair<const Nfa*, std::vector<NodeId>>> groups;
    };
    using SeqKey = std::tuple<NodeId, int, int>;  // node, state, item (roots: -1,-1,-1)

    int state_position(NodeId v, int q)
    {
        auto [it, fresh] = state_pos_.try_emplace({v, q}, -1);
        if (fresh) {
            it->second = game_.add_position(Player::Verifier, aut_.priority[q]);
            work_.emplace_back(v, q);
        }
        return it->second;
    }

    void expand_state(NodeId v, int q)
    {
        int pos = state_pos_.at({v, q});
        const auto& node = g_.node(v);
        const auto& items = aut_.items(q, node.label.text());
        if (node.children.empty()) {
            bool ok = false;
            for (const auto& it : items) ok = ok || it.accepts_no_children();
            game_.positions[pos].terminal_winner = ok ? Player::Verifier : Player::Refuter;
            return;
        }
        auto children = g_.sorted_children(v);
        for (std::size_t i = 0; i < items.size(); ++i) {
            const auto& item = items[i];
            Sequence seq;
            bool consistent = true;
            for (const auto& [label, nfa] : item.children)
                if (std::none_of(children.begin(), children.end(), [&](const Edge& e) { return e.label == label; }) &&
                    !nfa.accepts_empty())
                    consistent = false;
            if (!consistent) continue;
            for (const auto& e : children) {
                if (seq.groups.empty() || group_label_.back() != e.label) {
                    seq.groups.push_back({item.constraint(e.label), {}});
                    group_label_.push_back(e.label);
                }
                seq.groups.back().second.push_back(e.target);
            }
            group_label_.clear();
            expand_sequence(pos, seq, {v, q, static_cast<int>(i)});
        }
    }

    void expand_sequence(int from, const Sequence& seq, const SeqKey& key)
    {
        for (const auto& grp : seq.groups)
            if (grp.first == nullptr && !grp.second.empty()) return;  // item forbids these children
        std::size_t total = 0;
        for (const auto& grp : seq.groups) total += grp.second.size();
        if (enc_ != GameEncoding::Interleaved || total == 0) {
            std::vector<std::vector<int>> out;
            std::vector<int> cur;
            bool complete = enumerate(seq, 0, 0, {}, cur, out);
            if (complete || enc_ == GameEncoding::Full) {
                std::vector<NodeId> flat;
                for (const auto& grp : seq.groups) flat.insert(flat.end(), grp.second.begin(), grp.second.end());
                for (const auto& assignment : out) {
                    auto [it, fresh] = assignment_pos_.try_emplace({std::get<0>(key), assignment}, -1);
                    if (fresh) {
                        it->second = game_.add_position(Player::Refuter, 0);
                        for (std::size_t j = 0; j < flat.size(); ++j)
                            game_.add_edge(it->second, state_position(flat[j], assignment[j]));
                    }
                    game_.add_edge(from, it->second);
                }
                return;
            }
        }
        int id = static_cast<int>(sequences_.size());
        sequences_.push_back(seq);
        game_.add_edge(from, step_position(id, 0, -1));
    }

    // Depth-first enumeration of consistent assignments with subset-simulated
    // NFAs.  Returns false once the cap is exceeded (Auto mode).
    bool enumerate(const Sequence& seq, std::size_t gi, std::size_t ci, std::vector<int> set, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out)
    {
        if (gi == seq.groups.size()) {
            out.push_back(cur);
            return enc_ == GameEncoding::Full || out.size() <= cap_;
        }
        const auto& [nfa, members] = seq.groups[gi];
        if (ci == 0) set = nfa->initial;
        if (ci == members.size()) {
            if (!nfa->any_final(set)) return true;
            return enumerate(seq, gi + 1, 0, {}, cur, out);
        }
        std::set<int> letters;
        for (int p : set)
            for (const auto& t : nfa->delta[p]) letters.insert(t.letter);
        for (int r : letters) {
            auto next = nfa->step(set, r);
            cur.push_back(r);
            bool ok = enumerate(seq, gi, ci + 1, next, cur, out);
            cur.pop_back();
            if (!ok) return false;
        }
        return true;
    }

    // Verifier picks the state of child j (and an NFA transition); Refuter
    // then challenges that child or lets the sequence continue.
    int step_position(int seq_id, std::size_t j, int nfa_state)
    {
        auto [it, fresh] = step_pos_.try_emplace({seq_id, static_cast<int>(j), nfa_state}, -1);
        if (!fresh) return it->second;
        int pos = game_.add_position(Player::Verifier, 0);
        it->second = pos;

        const Sequence& seq = sequences_[seq_id];
        std::size_t gi = 0, offset = j;
        while (offset >= seq.groups[gi].second.size()) offset -= seq.groups[gi++].second.size();
        const Nfa& nfa = *seq.groups[gi].first;
        bool last_in_group = offset + 1 == seq.groups[gi].second.size();
        bool last = last_in_group && gi + 1 == seq.groups.size();
        NodeId child = seq.groups[gi].second[offset];

        std::vector<int> sources = nfa_state < 0 ? nfa.initial : std::vector<int>{nfa_state};
        std::set<std::pair<int, int>> moves;  // (child state, next NFA state)
        for (int p : sources)
            for (const auto& t : nfa.delta[p])
                if (!last_in_group || nfa.final[t.to]) moves.insert({t.letter, t.to});
        for (auto [r, next] : moves) {
            int ref = game_.add_position(Player::Refuter, 0);
            game_.add_edge(pos, ref);
            game_.add_edge(ref, state_position(child, r));
            if (!last) game_.add_edge(ref, step_position(seq_id, j + 1, last_in_group ? -1 : next));
        }
        return pos;
    }

    const ParityForestAutomaton& aut_;
    const ForestGraph& g_;
    GameEncoding enc_;
    std::size_t cap_;
    ParityGame game_;
    std::map<std::pair<NodeId, int>, int> state_pos_;
    std::map<std::pair<NodeId, std::vector<int>>, int> assignment_pos_;
    std::map<std::tuple<int, int, int>, int> step_pos_;
    std::vector<Sequence> sequences_;
    std::vector<std::pair<NodeId, int>> work_;
    std::vector<int> group_label_;
};

}  // namespace detail

/// The membership game of `aut` on `g`; position 0 is the initial position
/// and Verifier wins from it iff the unravelling of g is accepted.
inline ParityGame membership_game(const ParityForestAutomaton& aut, const ForestGraph& g,
                                  GameEncoding enc = GameEncoding::Auto, std::size_t assignment_cap = 256)
{
    return detail::MembershipGameBuilder(aut, g, enc, assignment_cap).build();
}

inline bool accepts(const ParityForestAutomaton& aut, const ForestGraph& g, GameEncoding enc = GameEncoding::Auto)
{
    return solve(membership_game(aut, g, enc)).verifier_wins(0);
}

}  // namespace forestalg

#endif  // FORESTALG_AUTOMATON_HPP
