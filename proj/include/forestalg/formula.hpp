#ifndef FORESTALG_FORMULA_HPP
#define FORESTALG_FORMULA_HPP

// Counting EF formulas and their model checking on regular forests.
//
// Grammar (ASCII):
//   formula := disj
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '!' unary | 'P' name | 'E' [digits] '(' formula ')'
//            | 'true' | 'false' | '(' formula ')'
// E(...) abbreviates E1(...).

#include <cctype>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forestalg/forest.hpp"
#include "forestalg/graph.hpp"

namespace forestalg {

class FormulaError : public std::runtime_error {
public:
    FormulaError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)), position_(position)
    {
    }
    [[nodiscard]] std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { True, False, Atom, Exists, Not, And, Or };
    Kind kind;
    std::string symbol;  // Atom
    int count = 0;       // Exists
    std::vector<FormulaPtr> args;

    /// Forest formulas are boolean combinations of E_l(...) (and constants).
    [[nodiscard]] bool is_forest() const
    {
        switch (kind) {
        case Kind::Atom: return false;
        case Kind::True:
        case Kind::False:
        case Kind::Exists: return true;
        default:
            for (const auto& a : args)
                if (!a->is_forest()) return false;
            return true;
        }
    }
};

namespace fml {

inline FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
inline FormulaPtr top() { return make({Formula::Kind::True, {}, 0, {}}); }
inline FormulaPtr bottom() { return make({Formula::Kind::False, {}, 0, {}}); }
inline FormulaPtr atom(std::string a) { return make({Formula::Kind::Atom, std::move(a), 0, {}}); }
inline FormulaPtr exists(int l, FormulaPtr phi)
{
    if (l < 1) throw std::invalid_argument("E_l needs l >= 1");
    return make({Formula::Kind::Exists, {}, l, {std::move(phi)}});
}
inline FormulaPtr neg(FormulaPtr phi) { return make({Formula::Kind::Not, {}, 0, {std::move(phi)}}); }
inline FormulaPtr conj(std::vector<FormulaPtr> args)
{
    if (args.empty()) return top();
    if (args.size() == 1) return args.front();
    return make({Formula::Kind::And, {}, 0, std::move(args)});
}
inline FormulaPtr disj(std::vector<FormulaPtr> args)
{
    if (args.empty()) return bottom();
    if (args.size() == 1) return args.front();
    return make({Formula::Kind::Or, {}, 0, std::move(args)});
}

}  // namespace fml

/// Largest counting index l occurring in the formula.
inline int k_index(const Formula& f)
{
    int k = f.kind == Formula::Kind::Exists ? f.count : 0;
    for (const auto& a : f.args) k = std::max(k, k_index(*a));
    return k;
}

/// Nesting depth of E operators.
inline int depth(const Formula& f)
{
    int d = 0;
    for (const auto& a : f.args) d = std::max(d, depth(*a));
    return f.kind == Formula::Kind::Exists ? d + 1 : d;
}

namespace detail {

inline int precedence(const Formula& f)
{
    switch (f.kind) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    default: return 3;
    }
}

inline void print(std::ostream& out, const Formula& f)
{
    auto child = [&](const Formula& c, int min_prec) {
        bool paren = precedence(c) < min_prec;
        if (paren) out << '(';
        print(out, c);
        if (paren) out << ')';
    };
    switch (f.kind) {
    case Formula::Kind::True: out << "true"; break;
    case Formula::Kind::False: out << "false"; break;
    case Formula::Kind::Atom: out << 'P' << f.symbol; break;
    case Formula::Kind::Exists:
        out << 'E' << f.count << '(';
        print(out, *f.args[0]);
        out << ')';
        break;
    case Formula::Kind::Not:
        out << '!';
        child(*f.args[0], 3);
        break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            if (i) out << (f.kind == Formula::Kind::And ? " & " : " | ");
            child(*f.args[i], precedence(f) + 1);
        }
        break;
    }
}

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    struct Parsed {
        FormulaPtr formula;
        std::size_t start;
    };

    FormulaPtr run(bool forest)
    {
        auto p = disjunction();
        skip_ws();
        if (pos_ != text_.size()) throw FormulaError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        if (forest) require_forest(p);
        return p.formula;
    }

private:
    static void require_forest(const Parsed& p)
    {
        if (!p.formula->is_forest()) throw FormulaError("tree formula where forest formula expected", p.start);
    }

    Parsed disjunction()
    {
        skip_ws();
        std::size_t start = pos_;
        std::vector<FormulaPtr> args{conjunction().formula};
        while (eat('|')) args.push_back(conjunction().formula);
        return {fml::disj(std::move(args)), start};
    }

    Parsed conjunction()
    {
        skip_ws();
        std::size_t start = pos_;
        std::vector<FormulaPtr> args{unary().formula};
        while (eat('&')) args.push_back(unary().formula);
        return {fml::conj(std::move(args)), start};
    }

    Parsed unary()
    {
        skip_ws();
        std::size_t start = pos_;
        if (eat('!')) return {fml::neg(unary().formula), start};
        if (eat('(')) {
            auto inner = disjunction();
            expect(')');
            return {inner.formula, start};
        }
        if (pos_ >= text_.size()) throw FormulaError("unexpected end of formula", pos_);
        if (keyword("true")) return {fml::top(), start};
        if (keyword("false")) return {fml::bottom(), start};
        char c = text_[pos_];
        if (c == 'P') {
            ++pos_;
            std::size_t s = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
            if (s == pos_) throw FormulaError("expected a letter after P", pos_);
            return {fml::atom(std::string(text_.substr(s, pos_ - s))), start};
        }
        if (c == 'E') {
            ++pos_;
            std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            int l = s == pos_ ? 1 : std::stoi(std::string(text_.substr(s, pos_ - s)));
            if (l < 1) throw FormulaError("counting index must be at least 1", s);
            expect('(');
            auto inner = disjunction();
            expect(')');
            return {fml::exists(l, inner.formula), start};
        }
        throw FormulaError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    bool keyword(std::string_view kw)
    {
        if (text_.substr(pos_, kw.size()) != kw) return false;
        std::size_t end = pos_ + kw.size();
        if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
        pos_ = end;
        return true;
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
    void expect(char c)
    {
        if (!eat(c)) throw FormulaError(std::string("expected '") + c + "'", pos_);
    }
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a forest formula.
inline FormulaPtr parse_formula(std::string_view text) { return detail::FormulaParser(text).run(true); }
/// Parses a tree formula (atoms allowed at top level).
inline FormulaPtr parse_tree_formula(std::string_view text) { return detail::FormulaParser(text).run(false); }

inline std::string to_string(const Formula& f)
{
    std::ostringstream out;
    detail::print(out, f);
    return out.str();
}
inline std::string to_string(const FormulaPtr& f) { return to_string(*f); }

// ---------------------------------------------------------------------------
// Model checking

/// How E_l counts: `Inclusive` counts every vertex of the forest it is
/// evaluated on; `Literal` leaves out the roots of that forest.
enum class Semantics { Inclusive, Literal };

class ModelChecker {
public:
    ModelChecker(const ForestGraph& g, Semantics sem) : g_(g), sem_(sem), adj_(g.adjacency())
    {
        if (!g.is_closed()) throw ForestError("modelcheck: forest must not contain variables");
    }

    /// s |=_f phi for the whole forest.
    bool holds(const FormulaPtr& phi) { return forest_value(*phi); }

    /// s|_v |=_t phi.
    bool holds_at(NodeId v, const FormulaPtr& phi) { return tree_values(*phi)[v] != 0; }

private:
    struct Counted {
        std::vector<ClassCounts> strict;  // capped count of satisfying strict descendants
        std::vector<char> self;           // the node itself satisfies the argument
    };

    const Counted& counted(const Formula& e)
    {
        auto it = counts_.find(&e);
        if (it != counts_.end()) return it->second;
        const auto& sat = tree_values(*e.args[0]);
        std::vector<int> cls(g_.size());
        for (std::size_t v = 0; v < g_.size(); ++v) cls[v] = sat[v] ? 0 : -1;
        Counted c{capped_descendant_counts(adj_, cls, e.count), sat};
        return counts_.emplace(&e, std::move(c)).first->second;
    }

    int capped_sum(const Formula& e, const std::vector<NodeId>& nodes, bool include_nodes)
    {
        const auto& c = counted(e);
        int n = 0;
        for (NodeId v : nodes) {
            n += count_of(c.strict[v], 0) + (include_nodes && c.self[v] ? 1 : 0);
            if (n >= e.count) return e.count;
        }
        return n;
    }

    bool forest_value(const Formula& f)
    {
        switch (f.kind) {
        case Formula::Kind::True: return true;
        case Formula::Kind::False: return false;
        case Formula::Kind::Atom: throw ForestError("tree formula where forest formula expected");
        case Formula::Kind::Exists: return capped_sum(f, g_.roots(), sem_ == Semantics::Inclusive) >= f.count;
        case Formula::Kind::Not: return !forest_value(*f.args[0]);
        case Formula::Kind::And:
            for (const auto& a : f.args)
                if (!forest_value(*a)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& a : f.args)
                if (forest_value(*a)) return true;
            return false;
        }
        return false;
    }

    const std::vector<char>& tree_values(const Formula& f)
    {
        auto it = values_.find(&f);
        if (it != values_.end()) return it->second;
        const std::size_t n = g_.size();
        std::vector<char> out(n, 0);
        switch (f.kind) {
        case Formula::Kind::True: out.assign(n, 1); break;
        case Formula::Kind::False: break;
        case Formula::Kind::Atom:
            for (std::size_t v = 0; v < n; ++v) out[v] = g_.node(static_cast<NodeId>(v)).label.text() == f.symbol;
            break;
        case Formula::Kind::Exists:
            // a forest formula at a tree is evaluated on the successor forest of its root
            for (std::size_t v = 0; v < n; ++v) {
                if (sem_ == Semantics::Inclusive) {
                    out[v] = count_of(counted(f).strict[v], 0) >= f.count;
                } else {
                    std::vector<NodeId> children;
                    for (const auto& e : g_.node(static_cast<NodeId>(v)).children) children.push_back(e.target);
                    out[v] = capped_sum(f, children, false) >= f.count;
                }
            }
            break;
        case Formula::Kind::Not: {
            const auto& a = tree_values(*f.args[0]);
            for (std::size_t v = 0; v < n; ++v) out[v] = !a[v];
            break;
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            bool is_and = f.kind == Formula::Kind::And;
            out.assign(n, is_and ? 1 : 0);
            for (const auto& arg : f.args) {
                const auto& a = tree_values(*arg);
                for (std::size_t v = 0; v < n; ++v) out[v] = is_and ? (out[v] && a[v]) : (out[v] || a[v]);
            }
            break;
        }
        }
        return values_.emplace(&f, std::move(out)).first->second;
    }

    const ForestGraph& g_;
    Semantics sem_;
    Adjacency adj_;
    std::unordered_map<const Formula*, std::vector<char>> values_;
    std::unordered_map<const Formula*, Counted> counts_;
};

inline bool modelcheck(const ForestGraph& g, const FormulaPtr& phi, Semantics sem = Semantics::Inclusive)
{
    if (!phi->is_forest()) throw ForestError("tree formula where forest formula expected");
    return ModelChecker(g, sem).holds(phi);
}

inline Semantics parse_semantics(const std::string& s)
{
    if (s == "inclusive") return Semantics::Inclusive;
    if (s == "literal") return Semantics::Literal;
    throw std::invalid_argument("unknown semantics '" + s + "' (expected inclusive or literal)");
}

}  // namespace forestalg

#endif  // FORESTALG_FORMULA_HPP
