#ifndef FORESTALG_EQUATIONS_HPP
#define FORESTALG_EQUATIONS_HPP

// Equation checkers: bisimulation invariance, EF, cEF_k and cEF.

#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "forestalg/algebra.hpp"
#include "forestalg/terms.hpp"

namespace forestalg {

struct EquationFailure {
    std::string equation;
    json instance;
    std::string lhs, rhs;
};

struct EquationResult {
    std::string equation;
    long long instances = 0;
    long long failures = 0;
};

struct EquationReport {
    std::string check;
    std::optional<int> k;
    std::optional<long long> K;
    std::string mode;
    std::vector<EquationResult> equations;
    std::vector<EquationFailure> failures;  // at most `witness_limit` per equation
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const
    {
        for (const auto& e : equations)
            if (e.failures) return false;
        return true;
    }
    [[nodiscard]] std::string verdict() const
    {
        if (!passed()) return "fail";
        return mode == "refute-only" ? "pass (constant instances)" : "pass";
    }
    [[nodiscard]] json to_json() const
    {
        json out = {{"check", check}};
        if (k) out["k"] = *k;
        if (K) out["K"] = *K;
        if (!mode.empty()) out["mode"] = mode;
        out["verdict"] = passed() ? "pass" : "fail";
        json eqs = json::array();
        for (const auto& e : equations)
            eqs.push_back({{"equation", e.equation}, {"instances", e.instances}, {"failures", e.failures}});
        out["equations"] = eqs;
        json fs = json::array();
        for (const auto& f : failures)
            fs.push_back({{"equation", f.equation}, {"instance", f.instance}, {"lhs", f.lhs}, {"rhs", f.rhs}});
        out["failures"] = fs;
        if (!notes.empty()) out["notes"] = notes;
        return out;
    }
};

namespace detail {

class ReportBuilder {
public:
    ReportBuilder(EquationReport& r, std::size_t witness_limit) : r_(r), limit_(witness_limit) {}

    void begin(const std::string& eq) { r_.equations.push_back({eq, 0, 0}); }
    void record(const std::string& lhs, const std::string& rhs, const json& instance)
    {
        auto& cur = r_.equations.back();
        ++cur.instances;
        if (lhs == rhs) return;
        if (static_cast<std::size_t>(cur.failures++) < limit_) r_.failures.push_back({cur.equation, instance, lhs, rhs});
    }

private:
    EquationReport& r_;
    std::size_t limit_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Constants

/// |A0|^(2|A1|) + |A0|; throws if it does not fit into 63 bits.
inline long long compute_K(long long n0, long long n1)
{
    long long p = 1;
    for (long long i = 0; i < 2 * n1; ++i) {
        if (n0 != 0 && p > (INT64_MAX - n0) / n0) throw std::overflow_error("K does not fit into 64 bits");
        p *= n0;
    }
    return p + n0;
}
inline long long compute_K(const AlgebraPresentation& p)
{
    return compute_K(static_cast<long long>(p.of_arity(0).size()), static_cast<long long>(p.of_arity(1).size()));
}

/// (k+3)(|A0|+1) + k + 2
inline long long invariance_level(long long n0, long long k) { return (k + 3) * (n0 + 1) + k + 2; }
inline long long invariance_level(const AlgebraPresentation& p, long long k)
{
    return invariance_level(static_cast<long long>(p.of_arity(0).size()), k);
}

// ---------------------------------------------------------------------------
// Bisimulation invariance

enum class BisimMode { Auto, Full, RefuteOnly };

inline EquationReport check_bisim_invariance(const Algebra& alg, BisimMode mode = BisimMode::Auto,
                                             std::size_t witness_limit = 20)
{
    const auto& pres = alg.presentation();
    EquationReport r;
    r.check = "bisim_invariance";
    if (mode == BisimMode::Auto) {
        mode = pres.has_arity(4) ? BisimMode::Full : BisimMode::RefuteOnly;
        if (mode == BisimMode::RefuteOnly)
            r.notes.push_back("arity 4 is not listed; the exchange equation is checked on constant instances only");
    }
    if (mode == BisimMode::Full && !pres.has_arity(4))
        throw AlgebraError(AlgebraError::Kind::MissingArity, "full mode needs arity 4 elements");
    r.mode = mode == BisimMode::Full ? "full" : "refute-only";
    if (mode == BisimMode::RefuteOnly)
        r.notes.push_back("refute-only mode: a pass does not establish the arity-4 exchange equation");

    const auto& A0 = pres.of_arity(0);
    const auto& A1 = pres.of_arity(1);
    detail::ReportBuilder rb(r, witness_limit);
    auto v0 = [&](const ForestGraph& g) { return alg.evaluate(g, 0); };

    rb.begin("c + c = c");
    for (const auto& c : A0) rb.record(v0(build::leaves({c, c})), c, {{"c", c}});

    rb.begin("c + d = d + c");
    for (const auto& c : A0)
        for (const auto& d : A0) rb.record(v0(build::leaves({c, d})), v0(build::leaves({d, c})), {{"c", c}, {"d", d}});

    rb.begin("a(x0 + x0) = a(x0)");
    for (const auto& a : A1)
        rb.record(alg.evaluate(build::apply(a, {"x0", "x0"}), 1), alg.evaluate(build::chain({a}), 1), {{"a", a}});

    rb.begin("a(x0 + x1 + x2 + x3) = a(x0 + x2 + x1 + x3)");
    for (const auto& a : A1) {
        if (mode == BisimMode::Full) {
            rb.record(alg.evaluate(build::apply(a, {"x0", "x1", "x2", "x3"}), 4),
                      alg.evaluate(build::apply(a, {"x0", "x2", "x1", "x3"}), 4), {{"a", a}});
            continue;
        }
        for (const auto& c0 : A0)
            for (const auto& c1 : A0)
                for (const auto& c2 : A0)
                    for (const auto& c3 : A0)
                        rb.record(v0(build::apply(a, {c0, c1, c2, c3})), v0(build::apply(a, {c0, c2, c1, c3})),
                                  {{"a", a}, {"x0", c0}, {"x1", c1}, {"x2", c2}, {"x3", c3}});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Marked reachability

/// Set of triples (d, i, rootMark): d is the value of a finite forest over
/// A0 u A1 in which i leaves (capped) are marked copies of c; rootMark says
/// that a mark occurs as a root.
struct MarkedReachSet {
    int cap = 0;
    int n0 = 0;
    std::vector<boost::dynamic_bitset<>> counts;  // index 2*d + rootMark, bit i

    [[nodiscard]] bool contains(int d, int i, bool root) const { return counts.at(2 * d + (root ? 1 : 0)).test(i); }

    [[nodiscard]] std::set<std::tuple<int, int, bool>> triples() const
    {
        std::set<std::tuple<int, int, bool>> out;
        for (int d = 0; d < n0; ++d)
            for (int r = 0; r < 2; ++r)
                for (auto i = counts[2 * d + r].find_first(); i != boost::dynamic_bitset<>::npos;
                     i = counts[2 * d + r].find_next(i))
                    out.emplace(d, static_cast<int>(i), r == 1);
        return out;
    }
};

namespace detail {

// {min(i + j, cap) : i in a, j in b}
inline boost::dynamic_bitset<> capped_sumset(const boost::dynamic_bitset<>& a, const boost::dynamic_bitset<>& b,
                                             std::size_t cap)
{
    boost::dynamic_bitset<> out(cap + 1);
    if (a.none() || b.none()) return out;
    std::size_t top = 0;
    for (auto i = a.find_first(); i != boost::dynamic_bitset<>::npos; i = a.find_next(i)) top = i;
    for (auto j = b.find_first(); j != boost::dynamic_bitset<>::npos; j = b.find_next(j)) {
        out |= a << j;
        if (top + j > cap) out.set(cap);
    }
    return out;
}

}  // namespace detail

inline MarkedReachSet marked_reach(const DerivedTables& t, int c, int cap)
{
    MarkedReachSet m;
    m.cap = cap;
    m.n0 = t.n0();
    const auto size = static_cast<std::size_t>(cap) + 1;
    m.counts.assign(2 * static_cast<std::size_t>(m.n0), boost::dynamic_bitset<>(size));
    for (int d = 0; d < m.n0; ++d) m.counts[2 * d].set(0);
    if (cap > 0) m.counts[2 * static_cast<std::size_t>(c) + 1].set(1);  // cap 0: no marks at all

    bool changed = true;
    while (changed) {
        changed = false;
        auto merge = [&](std::size_t idx, const boost::dynamic_bitset<>& bits) {
            if (bits.is_subset_of(m.counts[idx])) return;
            m.counts[idx] |= bits;
            changed = true;
        };
        for (int d = 0; d < m.n0; ++d)
            for (int r = 0; r < 2; ++r) {
                const auto& s = m.counts[2 * d + r];
                if (s.none()) continue;
                for (int u = 0; u < t.n1(); ++u) merge(2 * static_cast<std::size_t>(t.act[u][d]), s);
                for (int d2 = 0; d2 < m.n0; ++d2)
                    for (int r2 = 0; r2 < 2; ++r2) {
                        const auto& s2 = m.counts[2 * d2 + r2];
                        if (s2.none()) continue;
                        merge(2 * static_cast<std::size_t>(t.hsum0[d][d2]) + (r || r2 ? 1 : 0),
                              detail::capped_sumset(s, s2, static_cast<std::size_t>(cap)));
                    }
            }
    }
    return m;
}

// ---------------------------------------------------------------------------
// cEF_k

/// Which path is used to evaluate the equation sides.
enum class Route { Graphs, Tables };

struct CefOptions {
    Route route = Route::Graphs;
    std::size_t witness_limit = 20;
    bool ef_names = false;  // phrase the report against the EF equation list
};

namespace detail {

inline std::string g_name(int i, bool ef)
{
    if (!ef) {
        if (i == 1) return "G1_k";
        if (i == 12) return "G12_k";
        return "G" + std::to_string(i);
    }
    switch (i) {
    case 2: return "(ab)^pi = b(ab)^pi";
    case 3: return "a^omega + a^omega = a^omega";
    case 4: return "c + d = d + c";
    case 5: return "(a(x) + b(x))^omega = (ab(x))^omega";
    case 6: return "(a(x) + c)^omega = (a(x + c))^omega";
    case 7: return "(a(x + c + c))^omega = (a(x + c))^omega";
    case 8: return "[a(b(x0,x1))^omega1]^omega0 = [ab(x0,x0)]^omega0";
    case 9: return "(abb')^omega = (ab'b)^omega";
    case 10: return "(aab)^omega = (ab)^omega";
    case 11: return "[a(x + bc + c)]^omega = [a(x + bc)]^omega";
    case 12: return "[a(x + a^pi c)]^omega = a^pi c";
    default: return "?";
    }
}

inline long long lcm_upto(int n)
{
    long long l = 1;
    for (int i = 2; i <= n; ++i) l = std::lcm(l, static_cast<long long>(i));
    return l;
}

}  // namespace detail

/// (a(k*x))^pi (c), through the action d -> a(k*d).  u^N equals u^pi
/// whenever N is a multiple of every possible period and at least |A1|.
inline int g12_base_by_iteration(const DerivedTables& t, int a, int c, long long k)
{
    long long N = detail::lcm_upto(t.n1());
    int d = c;
    std::vector<int> kd(static_cast<std::size_t>(t.n0()));
    for (int e = 0; e < t.n0(); ++e) kd[e] = t.times(k, e);
    // the orbit of c under the action is eventually periodic; shortcut it
    std::vector<long long> seen(static_cast<std::size_t>(t.n0()), -1);
    for (long long step = 0; step < N; ++step) {
        if (seen[d] >= 0) {
            long long period = step - seen[d];
            long long remaining = (N - step) % period;
            for (long long s = 0; s < remaining; ++s) d = t.act[a][kd[d]];
            return d;
        }
        seen[d] = step;
        d = t.act[a][kd[d]];
    }
    return d;
}

/// (a(k*x))^pi (c), through the tables dup and piExp (needs k <= kmax).
inline int g12_base_by_dup(const DerivedTables& t, int a, int c, int k)
{
    return t.act[t.pipow(t.dup[a][k - 1])][c];
}

/// The (G1)_k check through marked reachability.
inline void check_g1(const DerivedTables& t, long long k, detail::ReportBuilder& rb, bool ef)
{
    const int cap = static_cast<int>(k);
    for (int c = 0; c < t.n0(); ++c) {
        auto m = marked_reach(t, c, cap);
        std::vector<int> mult(static_cast<std::size_t>(k) + 2);
        mult[0] = t.zero;
        for (std::size_t j = 1; j < mult.size(); ++j) mult[j] = t.hsum0[mult[j - 1]][c];
        for (int d = 0; d < t.n0(); ++d) {
            const auto& bits = m.counts[2 * d];
            for (auto i = bits.find_first(); i != boost::dynamic_bitset<>::npos; i = bits.find_next(i)) {
                int lhs = t.hsum0[d][mult[k - i]];
                int rhs = t.hsum0[d][mult[k - i + 1]];
                json inst = {{"c", t.A0[c]}, {"d", t.A0[d]}, {"i", i}};
                if (ef) {
                    // k = 1: i = 0 is c = c + c (after d + ...), i = 1 is ac = ac + c
                    rb.begin(i == 0 ? "c = c+c" : "ac = ac+c");
                }
                rb.record(t.A0[lhs], t.A0[rhs], inst);
            }
        }
    }
}

inline EquationReport check_cefk(const Algebra& alg, const DerivedTables& t, long long k, const CefOptions& opt = {})
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const auto& pres = alg.presentation();
    if (!pres.generated_by_low_arities())
        throw AlgebraError(AlgebraError::Kind::Malformed, "cEF checks need an algebra generated by arities 0 and 1");
    EquationReport r;
    r.check = opt.ef_names ? "ef" : "cef_k";
    r.k = static_cast<int>(k);
    r.mode = opt.route == Route::Graphs ? "graphs" : "tables";
    detail::ReportBuilder rb(r, opt.witness_limit);
    const bool ef = opt.ef_names;
    const int n0 = t.n0(), n1 = t.n1();
    const auto& A0 = t.A0;
    const auto& A1 = t.A1;
    const bool graphs = opt.route == Route::Graphs;
    TermCompiler tc(alg);
    using T = Term;
    auto e0 = [&](const TermPtr& term) { return alg.evaluate(tc.compile(term), 0); };
    auto e1 = [&](const TermPtr& term) { return alg.evaluate(tc.compile(term), 1); };
    auto x = [] { return T::var(0); };
    auto el = [](const std::string& n) { return T::elem(n); };
    auto ax = [&](const std::string& a, std::vector<TermPtr> parts) { return T::app(a, {T::sum(std::move(parts))}); };

    // (G1)_k
    if (ef) {
        // EF names depend on the mark count; equations are created on demand
        EquationReport tmp;
        detail::ReportBuilder trb(tmp, opt.witness_limit);
        check_g1(t, k, trb, true);
        for (const char* name : {"c = c+c", "ac = ac+c"}) {
            rb.begin(name);
            for (const auto& e : tmp.equations) {
                if (e.equation != name) continue;
                r.equations.back().instances += e.instances;
                r.equations.back().failures += e.failures;
            }
            std::size_t listed = 0;
            for (const auto& f : tmp.failures)
                if (f.equation == name && listed++ < opt.witness_limit) r.failures.push_back(f);
        }
    } else {
        rb.begin(detail::g_name(1, false));
        check_g1(t, k, rb, false);
    }

    rb.begin(detail::g_name(2, ef));
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            json inst = {{"a", A1[a]}, {"b", A1[b]}};
            if (graphs) {
                auto ab = T::pipow(T::chain({el(A1[a]), el(A1[b])}));
                rb.record(e1(ab), e1(T::chain({el(A1[b]), ab})), inst);
            } else {
                int p = t.pipow(t.vcomp[a][b]);
                rb.record(A1[p], A1[t.vcomp[b][p]], inst);
            }
        }

    rb.begin(detail::g_name(3, ef));
    for (int a = 0; a < n1; ++a) {
        json inst = {{"a", A1[a]}};
        if (graphs) {
            auto w = T::omega(el(A1[a]));
            rb.record(e0(T::sum({w, w})), e0(w), inst);
        } else {
            int w = t.omegaPow[a];
            rb.record(A0[t.hsum0[w][w]], A0[w], inst);
        }
    }

    rb.begin(detail::g_name(4, ef));
    for (int c = 0; c < n0; ++c)
        for (int d = 0; d < n0; ++d) {
            json inst = {{"c", A0[c]}, {"d", A0[d]}};
            if (graphs)
                rb.record(e0(T::sum({el(A0[c]), el(A0[d])})), e0(T::sum({el(A0[d]), el(A0[c])})), inst);
            else
                rb.record(A0[t.hsum0[c][d]], A0[t.hsum0[d][c]], inst);
        }

    rb.begin(detail::g_name(5, ef));
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            json inst = {{"a", A1[a]}, {"b", A1[b]}};
            if (graphs)
                rb.record(e0(T::omega(T::sum({el(A1[a]), el(A1[b])}))),
                          e0(T::omega(T::chain({el(A1[a]), el(A1[b])}))), inst);
            else
                rb.record(A0[t.omegaPow[t.hsum1[a][b]]], A0[t.omegaPow[t.vcomp[a][b]]], inst);
        }

    rb.begin(detail::g_name(6, ef));
    for (int a = 0; a < n1; ++a)
        for (int c = 0; c < n0; ++c) {
            json inst = {{"a", A1[a]}, {"c", A0[c]}};
            if (graphs)
                rb.record(e0(T::omega(T::sum({el(A1[a]), el(A0[c])}))), e0(T::omega(ax(A1[a], {x(), el(A0[c])}))),
                          inst);
            else
                rb.record(A0[t.omegaPow[t.hplus[a][c]]], A0[t.omegaPow[t.ext[a][c]]], inst);
        }

    rb.begin(detail::g_name(7, ef));
    for (int a = 0; a < n1; ++a)
        for (int c = 0; c < n0; ++c) {
            json inst = {{"a", A1[a]}, {"c", A0[c]}};
            if (graphs)
                rb.record(e0(T::omega(ax(A1[a], {x(), el(A0[c]), el(A0[c])}))),
                          e0(T::omega(ax(A1[a], {x(), el(A0[c])}))), inst);
            else
                rb.record(A0[t.omegaPow[t.ext[a][t.hsum0[c][c]]]], A0[t.omegaPow[t.ext[a][c]]], inst);
        }

    // (G8) has no table form; it is always evaluated on graphs.
    rb.begin(detail::g_name(8, ef));
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            json inst = {{"a", A1[a]}, {"b", A1[b]}};
            auto inner = T::omega(ax(A1[b], {T::var(0), T::var(1)}), 1);
            auto lhs = T::omega(T::app(A1[a], {inner}), 0);
            auto rhs = T::omega(T::app(A1[a], {ax(A1[b], {T::var(0), T::var(0)})}), 0);
            rb.record(e0(lhs), e0(rhs), inst);
        }

    rb.begin(detail::g_name(9, ef));
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b)
            for (int b2 = 0; b2 < n1; ++b2) {
                json inst = {{"a", A1[a]}, {"b", A1[b]}, {"b'", A1[b2]}};
                if (graphs)
                    rb.record(e0(T::omega(T::chain({el(A1[a]), el(A1[b]), el(A1[b2])}))),
                              e0(T::omega(T::chain({el(A1[a]), el(A1[b2]), el(A1[b])}))), inst);
                else
                    rb.record(A0[t.omegaPow[t.vcomp[t.vcomp[a][b]][b2]]], A0[t.omegaPow[t.vcomp[t.vcomp[a][b2]][b]]],
                              inst);
            }

    rb.begin(detail::g_name(10, ef));
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            json inst = {{"a", A1[a]}, {"b", A1[b]}};
            if (graphs)
                rb.record(e0(T::omega(T::chain({el(A1[a]), el(A1[a]), el(A1[b])}))),
                          e0(T::omega(T::chain({el(A1[a]), el(A1[b])}))), inst);
            else
                rb.record(A0[t.omegaPow[t.vcomp[t.vcomp[a][a]][b]]], A0[t.omegaPow[t.vcomp[a][b]]], inst);
        }

    rb.begin(detail::g_name(11, ef));
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b)
            for (int c = 0; c < n0; ++c) {
                json inst = {{"a", A1[a]}, {"b", A1[b]}, {"c", A0[c]}};
                if (graphs) {
                    auto bc = T::app(A1[b], {el(A0[c])});
                    rb.record(e0(T::omega(ax(A1[a], {x(), bc, el(A0[c])}))), e0(T::omega(ax(A1[a], {x(), bc}))), inst);
                } else {
                    int bc = t.act[b][c];
                    rb.record(A0[t.omegaPow[t.ext[a][t.hsum0[bc][c]]]], A0[t.omegaPow[t.ext[a][bc]]], inst);
                }
            }

    // (G12)_k always goes through the tables
    rb.begin(detail::g_name(12, ef));
    for (int a = 0; a < n1; ++a)
        for (int c = 0; c < n0; ++c) {
            int e = k <= t.kmax ? g12_base_by_dup(t, a, c, static_cast<int>(k)) : g12_base_by_iteration(t, a, c, k);
            rb.record(A0[t.omegaPow[t.ext[a][e]]], A0[t.times(k, e)], {{"a", A1[a]}, {"c", A0[c]}});
        }
    return r;
}

inline EquationReport check_cefk(const Algebra& alg, long long k, const CefOptions& opt = {})
{
    auto t = derive_tables(alg, static_cast<int>(std::min<long long>(k, 4)));
    return check_cefk(alg, t, k, opt);
}

inline EquationReport check_ef(const Algebra& alg, const CefOptions& opt = {})
{
    CefOptions o = opt;
    o.ef_names = true;
    return check_cefk(alg, 1, o);
}

inline EquationReport check_cef(const Algebra& alg, const CefOptions& opt = {})
{
    long long K = compute_K(alg.presentation());
    auto r = check_cefk(alg, K, opt);
    r.check = "cef";
    r.K = K;
    return r;
}

/// (G1)_k by direct quantification over listed elements of arity n <= min(k, 2),
/// each a_n(c, ..., c) built as a depth-2 forest.
inline EquationReport check_g1_direct(const Algebra& alg, const DerivedTables& t, int k)
{
    const auto& pres = alg.presentation();
    EquationReport r;
    r.check = "g1_direct";
    r.k = k;
    detail::ReportBuilder rb(r, 20);
    rb.begin("G1_k");
    for (int c = 0; c < t.n0(); ++c)
        for (int n = 0; n <= std::min(k, 2); ++n) {
            if (!pres.has_arity(n)) continue;
            for (const auto& an : pres.of_arity(n)) {
                ForestGraph g(alg.alphabet());
                NodeId root = g.add_node(Label::sym(an));
                g.add_root(root);
                for (int j = 0; j < n; ++j) g.add_edge(root, j, g.add_node(Label::sym(t.A0[c])));
                int d = t.index0(alg.evaluate(g, 0));
                int lhs = t.hsum0[d][t.times(k - n, c)];
                int rhs = t.hsum0[d][t.times(k - n + 1, c)];
                rb.record(t.A0[lhs], t.A0[rhs], {{"c", t.A0[c]}, {"a", an}, {"n", n}});
            }
        }
    return r;
}

}  // namespace forestalg

#endif  // FORESTALG_EQUATIONS_HPP
