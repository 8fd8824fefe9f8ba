#ifndef FORESTALG_ALGEBRA_HPP
#define FORESTALG_ALGEBRA_HPP

// Finitary forest algebras presented by one automaton per element, the
// product evaluator on regular forests, and derived operation tables.

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "forestalg/automaton.hpp"
#include "forestalg/forest.hpp"
#include "forestalg/forest_io.hpp"

namespace forestalg {

class AlgebraError : public std::runtime_error {
public:
    enum class Kind { NoAccept, MultiAccept, MissingArity, Malformed };
    AlgebraError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    [[nodiscard]] Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct AlgebraPresentation {
    std::map<int, std::vector<std::string>> elements;  // arity -> names in listed order
    std::vector<std::string> generators;
    std::vector<std::string> accepted;
    std::map<std::string, ParityForestAutomaton> automata;

    [[nodiscard]] bool has_arity(int m) const { return elements.count(m) != 0; }
    [[nodiscard]] int max_arity() const { return elements.empty() ? -1 : elements.rbegin()->first; }

    [[nodiscard]] const std::vector<std::string>& of_arity(int m) const
    {
        auto it = elements.find(m);
        if (it == elements.end())
            throw AlgebraError(AlgebraError::Kind::MissingArity, "arity " + std::to_string(m) + " elements are not listed");
        return it->second;
    }

    [[nodiscard]] std::optional<int> arity_of(const std::string& name) const
    {
        for (const auto& [m, names] : elements)
            if (std::find(names.begin(), names.end(), name) != names.end()) return m;
        return std::nullopt;
    }

    [[nodiscard]] int index_of(const std::string& name) const
    {
        for (const auto& [m, names] : elements) {
            auto it = std::find(names.begin(), names.end(), name);
            if (it != names.end()) return static_cast<int>(it - names.begin());
        }
        throw AlgebraError(AlgebraError::Kind::Malformed, "unknown element '" + name + "'");
    }

    /// All listed elements as a ranked alphabet.
    [[nodiscard]] RankedAlphabet alphabet() const
    {
        RankedAlphabet a;
        for (const auto& [m, names] : elements)
            for (const auto& n : names) a.add(n, m);
        return a;
    }

    [[nodiscard]] bool generated_by_low_arities() const
    {
        return std::all_of(generators.begin(), generators.end(), [&](const std::string& g) {
            auto m = arity_of(g);
            return m && *m <= 1;
        });
    }
};

inline AlgebraPresentation presentation_from_json(const json& j)
{
    AlgebraPresentation p;
    try {
        for (const auto& [key, names] : j.at("arities").items()) {
            int m = std::stoi(key);
            if (m < 0) throw AlgebraError(AlgebraError::Kind::Malformed, "negative arity");
            p.elements[m] = names.get<std::vector<std::string>>();
        }
        if (j.contains("generators")) p.generators = j.at("generators").get<std::vector<std::string>>();
        if (j.contains("accepted")) p.accepted = j.at("accepted").get<std::vector<std::string>>();
        std::set<std::string> seen;
        for (const auto& [m, names] : p.elements)
            for (const auto& n : names) {
                if (is_variable_name(n)) throw AlgebraError(AlgebraError::Kind::Malformed, "element name '" + n + "' is reserved");
                if (!seen.insert(n).second)
                    throw AlgebraError(AlgebraError::Kind::Malformed, "element '" + n + "' listed twice");
            }
        for (const auto& g : p.generators)
            if (!seen.count(g)) throw AlgebraError(AlgebraError::Kind::Malformed, "generator '" + g + "' is not listed");
        for (const auto& a : p.accepted)
            if (p.arity_of(a) != 0) throw AlgebraError(AlgebraError::Kind::Malformed, "accepted element '" + a + "' is not of arity 0");
        for (int m : {0, 1})
            if (!p.has_arity(m))
                throw AlgebraError(AlgebraError::Kind::MissingArity, "arity " + std::to_string(m) + " elements are mandatory");

        const auto& autos = j.at("automata");
        for (const auto& [m, names] : p.elements)
            for (const auto& n : names) {
                if (!autos.contains(n))
                    throw AlgebraError(AlgebraError::Kind::MissingArity, "no automaton for element '" + n + "'");
                auto aut = automaton_from_json(autos.at(n));
                for (const auto& [mm, nn] : p.elements) aut.alphabet.insert(nn.begin(), nn.end());
                for (int i = 0; i < m; ++i) aut.alphabet.insert("x" + std::to_string(i));
                p.automata.emplace(n, std::move(aut));
            }
    } catch (const json::exception& e) {
        throw AlgebraError(AlgebraError::Kind::Malformed, std::string("malformed algebra JSON: ") + e.what());
    } catch (const AutomatonError& e) {
        throw AlgebraError(AlgebraError::Kind::Malformed, e.what());
    }
    return p;
}

inline AlgebraPresentation load_presentation(const std::string& path)
{
    try {
        return presentation_from_json(read_json_file(path));
    } catch (const ForestError& e) {
        throw AlgebraError(AlgebraError::Kind::Malformed, e.what());
    }
}

/// A presentation together with the product evaluator.  Evaluation results
/// are memoised per canonical forest; the cache may be shared across threads.
class Algebra {
public:
    explicit Algebra(AlgebraPresentation p) : pres_(std::move(p)), alphabet_(pres_.alphabet()) {}

    Algebra(const Algebra& other) : pres_(other.pres_), alphabet_(other.alphabet_) {}

    [[nodiscard]] const AlgebraPresentation& presentation() const { return pres_; }
    [[nodiscard]] const RankedAlphabet& alphabet() const { return alphabet_; }

    /// The unique element of arity m whose automaton accepts g.
    std::string evaluate(const ForestGraph& input, int m) const
    {
        const auto& candidates = pres_.of_arity(m);
        ForestGraph g = input;
        g.set_alphabet(alphabet_);
        require_valid(g);
        if (g.arity() != m)
            throw AlgebraError(AlgebraError::Kind::Malformed,
                               "forest has arity " + std::to_string(g.arity()) + ", expected " + std::to_string(m));
        auto canon = canonical_form(g);
        std::string key = std::to_string(m) + '|' + canon.key;
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        std::vector<std::string> hits;
        for (const auto& e : candidates)
            if (accepts(pres_.automata.at(e), canon.graph)) hits.push_back(e);
        if (hits.empty())
            throw AlgebraError(AlgebraError::Kind::NoAccept, "no automaton of arity " + std::to_string(m) +
                                                                 " accepts the forest " + describe(canon.graph));
        if (hits.size() > 1)
            throw AlgebraError(AlgebraError::Kind::MultiAccept, "automata of " + hits[0] + " and " + hits[1] +
                                                                    " both accept the forest " + describe(canon.graph));
        std::unique_lock lock(mutex_);
        return cache_.try_emplace(key, hits.front()).first->second;
    }
    std::string evaluate(const ForestGraph& g) const { return evaluate(g, g.arity()); }

    [[nodiscard]] bool in_language(const ForestGraph& g) const
    {
        auto v = evaluate(g, 0);
        return std::find(pres_.accepted.begin(), pres_.accepted.end(), v) != pres_.accepted.end();
    }

    [[nodiscard]] std::size_t cache_size() const
    {
        std::shared_lock lock(mutex_);
        return cache_.size();
    }

    static std::string describe(const ForestGraph& g)
    {
        try {
            return to_term(g);
        } catch (const ForestError&) {
            return forest_to_json(g).dump();
        }
    }

private:
    AlgebraPresentation pres_;
    RankedAlphabet alphabet_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::string, std::string> cache_;
};

// ---------------------------------------------------------------------------
// Small forests over element names

namespace build {

/// u1(u2(...uk(x0)))
inline ForestGraph chain(const std::vector<std::string>& contexts)
{
    ForestGraph g;
    NodeId prev = kNoNode;
    for (const auto& u : contexts) {
        NodeId v = g.add_node(Label::sym(u));
        if (prev == kNoNode)
            g.add_root(v);
        else
            g.add_edge(prev, 0, v);
        prev = v;
    }
    NodeId x = g.add_node(Label::var(0));
    if (prev == kNoNode)
        g.add_root(x);
    else
        g.add_edge(prev, 0, x);
    return g;
}

/// u(children...) where each child is a leaf: an element name or "x<i>".
inline ForestGraph apply(const std::string& u, const std::vector<std::string>& leaves)
{
    ForestGraph g;
    NodeId r = g.add_node(Label::sym(u));
    g.add_root(r);
    for (const auto& l : leaves) g.add_edge(r, 0, g.add_node(Label::parse(l)));
    return g;
}

/// Sum of leaves.
inline ForestGraph leaves(const std::vector<std::string>& names)
{
    ForestGraph g;
    for (const auto& n : names) g.add_root(g.add_node(Label::parse(n)));
    return g;
}

/// The loop u(u(u(...))): one node with a 0-edge to itself.
inline ForestGraph loop(const std::string& u)
{
    ForestGraph g;
    NodeId v = g.add_node(Label::sym(u));
    g.add_edge(v, 0, v);
    g.add_root(v);
    return g;
}

}  // namespace build

// ---------------------------------------------------------------------------
// Derived tables (all entries are element indices within their arity)

struct DerivedTables {
    std::vector<std::string> A0, A1;
    int zero = 0;                             // value of the empty forest
    std::vector<std::vector<int>> hsum0;      // c + d
    std::vector<std::vector<int>> act;        // u(c)
    std::vector<std::vector<int>> vcomp;      // u(v(x))
    std::vector<int> omegaPow;                // u^omega
    std::vector<int> piExp;                   // minimal n with u^n idempotent
    std::vector<std::vector<int>> hsum1;      // u(x) + v(x)
    std::vector<std::vector<int>> ext;        // u(x + c)
    std::vector<std::vector<int>> hplus;      // u(x) + c
    int kmax = 0;
    std::vector<std::vector<std::vector<int>>> sub;  // sub[u][m-1][c] = u(m*x + c)
    std::vector<std::vector<int>> dup;               // dup[u][m-1] = u(m*x)

    [[nodiscard]] int n0() const { return static_cast<int>(A0.size()); }
    [[nodiscard]] int n1() const { return static_cast<int>(A1.size()); }

    [[nodiscard]] int vpow(int u, int n) const
    {
        int r = u;
        for (int i = 1; i < n; ++i) r = vcomp[r][u];
        return r;
    }
    /// u^pi
    [[nodiscard]] int pipow(int u) const { return vpow(u, piExp[u]); }

    /// n * c, with 0 * c = zero
    [[nodiscard]] int times(long long n, int c) const
    {
        int acc = zero, base = c;
        while (n > 0) {
            if (n & 1) acc = hsum0[acc][base];
            base = hsum0[base][base];
            n >>= 1;
        }
        return acc;
    }

    [[nodiscard]] int index0(const std::string& n) const { return index_in(A0, n); }
    [[nodiscard]] int index1(const std::string& n) const { return index_in(A1, n); }

private:
    static int index_in(const std::vector<std::string>& v, const std::string& n)
    {
        auto it = std::find(v.begin(), v.end(), n);
        if (it == v.end()) throw AlgebraError(AlgebraError::Kind::Malformed, "unknown element '" + n + "'");
        return static_cast<int>(it - v.begin());
    }
};

inline DerivedTables derive_tables(const Algebra& alg, int kmax = 1)
{
    const auto& pres = alg.presentation();
    DerivedTables t;
    t.A0 = pres.of_arity(0);
    t.A1 = pres.of_arity(1);
    t.kmax = kmax;
    const int n0 = t.n0(), n1 = t.n1();
    auto e0 = [&](const ForestGraph& g) { return t.index0(alg.evaluate(g, 0)); };
    auto e1 = [&](const ForestGraph& g) { return t.index1(alg.evaluate(g, 1)); };
    auto grid = [](int r, int c) { return std::vector<std::vector<int>>(r, std::vector<int>(c)); };

    t.zero = e0(ForestGraph{});
    t.hsum0 = grid(n0, n0);
    for (int c = 0; c < n0; ++c)
        for (int d = 0; d < n0; ++d) t.hsum0[c][d] = e0(build::leaves({t.A0[c], t.A0[d]}));
    t.act = grid(n1, n0);
    t.ext = grid(n1, n0);
    t.hplus = grid(n1, n0);
    for (int u = 0; u < n1; ++u)
        for (int c = 0; c < n0; ++c) {
            t.act[u][c] = e0(build::apply(t.A1[u], {t.A0[c]}));
            t.ext[u][c] = e1(build::apply(t.A1[u], {"x0", t.A0[c]}));
            t.hplus[u][c] = e1(hsum(build::chain({t.A1[u]}), build::leaves({t.A0[c]})));
        }
    t.vcomp = grid(n1, n1);
    t.hsum1 = grid(n1, n1);
    for (int u = 0; u < n1; ++u)
        for (int v = 0; v < n1; ++v) {
            t.vcomp[u][v] = e1(build::chain({t.A1[u], t.A1[v]}));
            t.hsum1[u][v] = e1(hsum(build::chain({t.A1[u]}), build::chain({t.A1[v]})));
        }
    t.omegaPow.resize(n1);
    t.piExp.resize(n1);
    for (int u = 0; u < n1; ++u) {
        t.omegaPow[u] = e0(build::loop(t.A1[u]));
        int p = u, n = 1;
        while (t.vcomp[p][p] != p) {
            p = t.vcomp[p][u];
            if (++n > n1 + 1) throw AlgebraError(AlgebraError::Kind::Malformed, "vertical composition is not associative");
        }
        t.piExp[u] = n;
    }
    t.sub.assign(n1, grid(kmax, n0));
    t.dup = grid(n1, kmax);
    for (int u = 0; u < n1; ++u)
        for (int m = 1; m <= kmax; ++m) {
            std::vector<std::string> xs(static_cast<std::size_t>(m), "x0");
            t.dup[u][m - 1] = e1(build::apply(t.A1[u], xs));
            for (int c = 0; c < n0; ++c) {
                auto ls = xs;
                ls.push_back(t.A0[c]);
                t.sub[u][m - 1][c] = e1(build::apply(t.A1[u], ls));
            }
        }
    return t;
}

/// a <=_L b: a = c(b) for some c in A1, or a = b + d for some d in A0.
inline bool leqL(const DerivedTables& t, int a, int b)
{
    for (int u = 0; u < t.n1(); ++u)
        if (t.act[u][b] == a) return true;
    for (int d = 0; d < t.n0(); ++d)
        if (t.hsum0[b][d] == a) return true;
    return false;
}

}  // namespace forestalg

#endif  // FORESTALG_ALGEBRA_HPP
