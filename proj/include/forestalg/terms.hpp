#ifndef FORESTALG_TERMS_HPP
#define FORESTALG_TERMS_HPP

// Algebra terms with omega- and pi-powers, compiled to regular-forest graphs.
// omega(t, i) closes every x_i leaf of t back onto the roots of t, so the
// infinite iteration becomes a loop in the graph.

#include <memory>
#include <string>
#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/forest.hpp"

namespace forestalg {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Elem, Var, App, Sum, Chain, Omega, PiPow };
    Kind kind;
    std::string name;                 // Elem, App
    int index = 0;                    // Var: variable; Omega: iterated variable
    std::vector<TermPtr> args;        // Sum, Chain, Omega/PiPow (one argument)
    std::vector<TermPtr> groups;      // App: one forest term per edge label

    static TermPtr elem(std::string n) { return std::make_shared<const Term>(Term{Kind::Elem, std::move(n), 0, {}, {}}); }
    static TermPtr var(int i) { return std::make_shared<const Term>(Term{Kind::Var, {}, i, {}, {}}); }
    static TermPtr app(std::string n, std::vector<TermPtr> groups)
    {
        return std::make_shared<const Term>(Term{Kind::App, std::move(n), 0, {}, std::move(groups)});
    }
    static TermPtr sum(std::vector<TermPtr> parts)
    {
        return std::make_shared<const Term>(Term{Kind::Sum, {}, 0, std::move(parts), {}});
    }
    /// t1(t2(...tn)): each term is plugged into x0 of its predecessor.
    static TermPtr chain(std::vector<TermPtr> parts)
    {
        return std::make_shared<const Term>(Term{Kind::Chain, {}, 0, std::move(parts), {}});
    }
    static TermPtr omega(TermPtr t, int i = 0)
    {
        return std::make_shared<const Term>(Term{Kind::Omega, {}, i, {std::move(t)}, {}});
    }
    static TermPtr pipow(TermPtr t) { return std::make_shared<const Term>(Term{Kind::PiPow, {}, 0, {std::move(t)}, {}}); }
};

class TermCompiler {
public:
    /// `alg` resolves element arities and evaluates the bases of pi-powers.
    explicit TermCompiler(const Algebra& alg) : alg_(alg) {}

    ForestGraph compile(const TermPtr& t) { return compile_node(*t).trimmed(); }

private:
    ForestGraph compile_node(const Term& t)
    {
        switch (t.kind) {
        case Term::Kind::Elem: return sing(alg_.alphabet(), t.name);
        case Term::Kind::Var: {
            ForestGraph g(alg_.alphabet());
            g.add_root(g.add_node(Label::var(t.index)));
            return g;
        }
        case Term::Kind::App: {
            ForestGraph g(alg_.alphabet());
            NodeId r = g.add_node(Label::sym(t.name));
            g.add_root(r);
            for (std::size_t j = 0; j < t.groups.size(); ++j) {
                ForestGraph part = compile_node(*t.groups[j]);
                NodeId off = g.absorb(part);
                for (NodeId pr : part.roots()) g.add_edge(r, static_cast<int>(j), pr + off);
            }
            return g;
        }
        case Term::Kind::Sum: {
            ForestGraph g(alg_.alphabet());
            for (const auto& p : t.args) g = hsum(g, compile_node(*p));
            return g;
        }
        case Term::Kind::Chain: {
            if (t.args.empty()) throw ForestError("empty chain");
            ForestGraph g = compile_node(*t.args.back());
            for (auto it = t.args.rbegin() + 1; it != t.args.rend(); ++it) g = substitute(compile_node(**it), 0, g);
            return g;
        }
        case Term::Kind::Omega: return close_loop(compile_node(*t.args[0]), t.index);
        case Term::Kind::PiPow: {
            ForestGraph base = compile_node(*t.args[0]);
            int n = pi_exponent(base);
            ForestGraph g = base;
            for (int i = 1; i < n; ++i) g = substitute(base, 0, g);
            return g;
        }
        }
        throw ForestError("unknown term");
    }

    static ForestGraph close_loop(ForestGraph g, int i)
    {
        for (NodeId r : g.roots())
            if (g.node(r).label.is_variable() && g.node(r).label.variable == i)
                throw ForestError("omega power of a term with root variable x" + std::to_string(i) + " is undefined");
        bool found = false;
        for (std::size_t v = 0; v < g.size(); ++v) {
            auto& node = g.mutable_node(static_cast<NodeId>(v));
            std::vector<Edge> next;
            for (const auto& e : node.children) {
                const auto& target = g.node(e.target).label;
                if (target.is_variable() && target.variable == i) {
                    found = true;
                    for (NodeId r : g.roots()) next.push_back({e.label, r});
                } else {
                    next.push_back(e);
                }
            }
            node.children = std::move(next);
        }
        if (!found) throw ForestError("omega power: variable x" + std::to_string(i) + " does not occur");
        return g.trimmed();
    }

    int pi_exponent(const ForestGraph& base)
    {
        // minimal n with u^n u^n = u^n, computed from compositions of the base forest
        ForestGraph power = base;
        for (int n = 1; n <= 64; ++n) {
            auto p = alg_.evaluate(power, 1);
            auto pp = alg_.evaluate(substitute(power, 0, power), 1);
            if (p == pp) return n;
            power = substitute(base, 0, power);
        }
        throw AlgebraError(AlgebraError::Kind::Malformed, "no idempotent power found");
    }

    const Algebra& alg_;
};

inline ForestGraph compile(const Algebra& alg, const TermPtr& t) { return TermCompiler(alg).compile(t); }

}  // namespace forestalg

#endif  // FORESTALG_TERMS_HPP
