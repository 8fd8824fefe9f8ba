#ifndef FORESTALG_NFA_HPP
#define FORESTALG_NFA_HPP

// Epsilon-free NFAs over a small integer alphabet (the states of a forest
// automaton), plus a compact regular-expression syntax compiling to them.
//
// Regex syntax: letters are identifiers separated by whitespace; postfix
// `*`, `+`, `?`; infix `|`; parentheses; `eps` denotes the empty word and
// `none` the empty language.  Example: "T* Y T*".

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace forestalg {

class NfaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Nfa {
    struct Transition {
        int letter;
        int to;
        friend auto operator<=>(const Transition&, const Transition&) = default;
    };

    int num_states = 0;
    std::vector<int> initial;
    std::vector<bool> final;
    std::vector<std::vector<Transition>> delta;  // per source state

    int add_state(bool is_final = false)
    {
        final.push_back(is_final);
        delta.emplace_back();
        return num_states++;
    }
    void add_transition(int from, int letter, int to) { delta.at(from).push_back({letter, to}); }

    [[nodiscard]] std::vector<int> step(const std::vector<int>& current, int letter) const
    {
        std::set<int> next;
        for (int q : current)
            for (const auto& t : delta[q])
                if (t.letter == letter) next.insert(t.to);
        return {next.begin(), next.end()};
    }

    [[nodiscard]] bool any_final(const std::vector<int>& set) const
    {
        return std::any_of(set.begin(), set.end(), [&](int q) { return final[q]; });
    }

    template <class Range>
    [[nodiscard]] bool accepts(const Range& word) const
    {
        std::vector<int> cur = initial;
        std::sort(cur.begin(), cur.end());
        for (int a : word) {
            cur = step(cur, a);
            if (cur.empty()) return false;
        }
        return any_final(cur);
    }
    [[nodiscard]] bool accepts_empty() const { return accepts(std::vector<int>{}); }

    /// Every word over letters 0..alphabet_size-1.
    static Nfa universal(int alphabet_size)
    {
        Nfa n;
        int q = n.add_state(true);
        n.initial = {q};
        for (int a = 0; a < alphabet_size; ++a) n.add_transition(q, a, q);
        return n;
    }
    /// Only the empty word.
    static Nfa epsilon()
    {
        Nfa n;
        n.initial = {n.add_state(true)};
        return n;
    }
    /// All words over the given letters.
    static Nfa star_of(const std::vector<int>& letters)
    {
        Nfa n;
        int q = n.add_state(true);
        n.initial = {q};
        for (int a : letters) n.add_transition(q, a, q);
        return n;
    }
};

namespace detail {

/// Thompson construction followed by epsilon elimination.
class RegexCompiler {
public:
    RegexCompiler(std::string_view text, std::function<int(const std::string&)> letter)
        : text_(text), letter_(std::move(letter))
    {
    }

    Nfa run()
    {
        Frag f = alternation();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character");
        final_state_ = f.out;
        return eliminate(f.in);
    }

private:
    struct Frag {
        int in, out;
    };
    struct RawEdge {
        int letter;  // -1: epsilon
        int to;
    };

    int fresh()
    {
        edges_.emplace_back();
        return static_cast<int>(edges_.size() - 1);
    }
    void link(int from, int letter, int to) { edges_[from].push_back({letter, to}); }

    Frag alternation()
    {
        Frag f = concatenation();
        while (eat('|')) {
            Frag g = concatenation();
            Frag h{fresh(), fresh()};
            link(h.in, -1, f.in);
            link(h.in, -1, g.in);
            link(f.out, -1, h.out);
            link(g.out, -1, h.out);
            f = h;
        }
        return f;
    }

    Frag concatenation()
    {
        Frag f{fresh(), 0};
        f.out = f.in;
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')') break;
            Frag g = postfix();
            link(f.out, -1, g.in);
            f.out = g.out;
        }
        return f;
    }

    Frag postfix()
    {
        Frag f = atom();
        for (;;) {
            if (eat('*')) {
                Frag h{fresh(), fresh()};
                link(h.in, -1, f.in);
                link(h.in, -1, h.out);
                link(f.out, -1, f.in);
                link(f.out, -1, h.out);
                f = h;
            } else if (eat('+')) {
                Frag h{fresh(), fresh()};
                link(h.in, -1, f.in);
                link(f.out, -1, f.in);
                link(f.out, -1, h.out);
                f = h;
            } else if (eat('?')) {
                Frag h{fresh(), fresh()};
                link(h.in, -1, f.in);
                link(h.in, -1, h.out);
                link(f.out, -1, h.out);
                f = h;
            } else {
                return f;
            }
        }
    }

    Frag atom()
    {
        skip_ws();
        if (eat('(')) {
            Frag f = alternation();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
            ++pos_;
        if (start == pos_) fail("expected a letter");
        std::string name(text_.substr(start, pos_ - start));
        Frag f{fresh(), fresh()};
        if (name == "eps") {
            link(f.in, -1, f.out);
        } else if (name != "none") {
            link(f.in, letter_(name), f.out);
        }
        return f;
    }

    Nfa eliminate(int start)
    {
        const int n = static_cast<int>(edges_.size());
        std::vector<std::vector<int>> closure(n);
        for (int q = 0; q < n; ++q) {
            std::vector<bool> seen(n, false);
            std::vector<int> stack{q};
            seen[q] = true;
            while (!stack.empty()) {
                int p = stack.back();
                stack.pop_back();
                closure[q].push_back(p);
                for (const auto& e : edges_[p])
                    if (e.letter < 0 && !seen[e.to]) {
                        seen[e.to] = true;
                        stack.push_back(e.to);
                    }
            }
        }
        // keep only states entered by a letter (plus the start state)
        std::vector<int> keep(n, -1);
        Nfa out;
        auto id = [&](int q) {
            if (keep[q] < 0) keep[q] = out.add_state();
            return keep[q];
        };
        id(start);
        for (int q = 0; q < n; ++q)
            for (const auto& e : edges_[q])
                if (e.letter >= 0) id(e.to);
        for (int q = 0; q < n; ++q) {
            if (keep[q] < 0) continue;
            std::set<Nfa::Transition> ts;
            bool fin = false;
            for (int p : closure[q]) {
                if (p == final_state_) fin = true;
                for (const auto& e : edges_[p])
                    if (e.letter >= 0) ts.insert({e.letter, id(e.to)});
            }
            out.final[keep[q]] = fin;
            out.delta[keep[q]].assign(ts.begin(), ts.end());
        }
        out.initial = {keep[start]};
        return out;
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
        throw NfaError("regex syntax error at position " + std::to_string(pos_) + " in \"" + std::string(text_) +
                       "\": " + msg);
    }

    std::string_view text_;
    std::function<int(const std::string&)> letter_;
    std::size_t pos_ = 0;
    std::vector<std::vector<RawEdge>> edges_;
    int final_state_ = -1;
};

}  // namespace detail

/// Compiles a regular expression whose letters are resolved by `letter`.
inline Nfa compile_regex(std::string_view text, const std::function<int(const std::string&)>& letter)
{
    return detail::RegexCompiler(text, letter).run();
}

}  // namespace forestalg

#endif  // FORESTALG_NFA_HPP
