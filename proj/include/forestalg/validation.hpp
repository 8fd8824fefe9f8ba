#ifndef FORESTALG_VALIDATION_HPP
#define FORESTALG_VALIDATION_HPP

// Sanity checks for algebra presentations: unit and associative laws,
// exactly-one acceptance and the laws of the derived operations.

#include <string>
#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/equations.hpp"
#include "forestalg/random.hpp"

namespace forestalg {

struct ValidationOptions {
    int samples = 1000;
    std::uint64_t seed = 1;
    int outer_max = 5;
    int inner_max = 4;
    int max_arity = 2;  // largest inner/outer arity used when sampling
    int regular_samples = 200;
    std::size_t witness_limit = 20;
};

namespace detail {

/// Largest m such that arities 0..m are all listed (capped).
inline int contiguous_arity(const AlgebraPresentation& p, int cap)
{
    int m = 0;
    while (m < cap && p.has_arity(m + 1)) ++m;
    return m;
}

inline std::string error_text(const AlgebraError& e)
{
    switch (e.kind()) {
    case AlgebraError::Kind::NoAccept: return std::string("NoAccept: ") + e.what();
    case AlgebraError::Kind::MultiAccept: return std::string("MultiAccept: ") + e.what();
    default: return e.what();
    }
}

}  // namespace detail

/// Runs every check and lists failures; evaluation errors during sampling
/// are recorded under "exactly one acceptance".
inline EquationReport validate_presentation(const Algebra& alg, const ValidationOptions& opt = {})
{
    const auto& pres = alg.presentation();
    EquationReport r;
    r.check = "validate";
    detail::ReportBuilder rb(r, opt.witness_limit);

    // exactly-one acceptance is filled in while the other checks run
    EquationResult accept{"exactly one acceptance", 0, 0};
    std::vector<EquationFailure> accept_failures;
    auto guarded = [&](const ForestGraph& g, int m) -> std::optional<std::string> {
        ++accept.instances;
        try {
            return alg.evaluate(g, m);
        } catch (const AlgebraError& e) {
            if (e.kind() != AlgebraError::Kind::NoAccept && e.kind() != AlgebraError::Kind::MultiAccept) throw;
            if (static_cast<std::size_t>(accept.failures++) < opt.witness_limit)
                accept_failures.push_back({accept.equation, json{{"forest", Algebra::describe(g)}, {"arity", m}},
                                           detail::error_text(e), "exactly one element"});
            return std::nullopt;
        }
    };

    rb.begin("unit law");
    for (const auto& [m, names] : pres.elements)
        for (const auto& a : names)
            if (auto v = guarded(sing(alg.alphabet(), a), m)) rb.record(*v, a, {{"element", a}});

    rb.begin("associative law");
    Rng rng(opt.seed);
    const int max_ar = detail::contiguous_arity(pres, opt.max_arity);
    RankedAlphabet labels;
    for (const auto& [m, names] : pres.elements)
        if (m <= max_ar)
            for (const auto& n : names) labels.add(n, m);
    for (int i = 0; i < opt.samples; ++i) {
        int outer = uniform(rng, 0, std::min(1, max_ar));
        auto s = random_nested_forest(rng, labels, opt.outer_max, opt.inner_max, max_ar, outer);
        auto flat = flatten(s, alg.alphabet());
        NestedForest pre = s;
        bool ok = true;
        for (auto& node : pre.nodes) {
            if (node.variable >= 0) continue;
            int m = node.label.arity();
            auto v = guarded(node.label, m);
            if (!v) {
                ok = false;
                break;
            }
            node.label = sing(alg.alphabet(), *v);
        }
        if (!ok) continue;
        auto lhs = guarded(flat, outer);
        auto rhs = guarded(flatten(pre, alg.alphabet()), outer);
        if (lhs && rhs) rb.record(*lhs, *rhs, {{"sample", i}, {"forest", Algebra::describe(flat)}});
    }

    // closed regular forests with cycles, only for exactly-one acceptance
    RankedAlphabet regular;
    for (const auto& n : pres.of_arity(0)) regular.add(n, 0);
    for (const auto& n : pres.of_arity(1)) regular.add(n, 1);
    for (int i = 0; i < opt.regular_samples; ++i) guarded(random_regular_forest(rng, regular, uniform(rng, 1, 5)), 0);

    // laws of the derived operations
    DerivedTables t;
    try {
        t = derive_tables(alg, 1);
    } catch (const AlgebraError& e) {
        if (e.kind() != AlgebraError::Kind::NoAccept && e.kind() != AlgebraError::Kind::MultiAccept) throw;
        ++accept.instances;
        ++accept.failures;
        accept_failures.push_back({accept.equation, json{{"tables", true}}, detail::error_text(e), "exactly one element"});
    }
    if (!t.A0.empty()) {
        const int n0 = t.n0(), n1 = t.n1();
        rb.begin("c + 0 = c = 0 + c");
        for (int c = 0; c < n0; ++c) {
            rb.record(t.A0[t.hsum0[c][t.zero]], t.A0[c], {{"c", t.A0[c]}});
            rb.record(t.A0[t.hsum0[t.zero][c]], t.A0[c], {{"c", t.A0[c]}});
        }
        rb.begin("(c + d) + e = c + (d + e)");
        for (int c = 0; c < n0; ++c)
            for (int d = 0; d < n0; ++d)
                for (int e = 0; e < n0; ++e)
                    rb.record(t.A0[t.hsum0[t.hsum0[c][d]][e]], t.A0[t.hsum0[c][t.hsum0[d][e]]],
                              {{"c", t.A0[c]}, {"d", t.A0[d]}, {"e", t.A0[e]}});
        rb.begin("(uv)w = u(vw)");
        for (int u = 0; u < n1; ++u)
            for (int v = 0; v < n1; ++v)
                for (int w = 0; w < n1; ++w)
                    rb.record(t.A1[t.vcomp[t.vcomp[u][v]][w]], t.A1[t.vcomp[u][t.vcomp[v][w]]],
                              {{"u", t.A1[u]}, {"v", t.A1[v]}, {"w", t.A1[w]}});
        rb.begin("(uv)(c) = u(v(c))");
        for (int u = 0; u < n1; ++u)
            for (int v = 0; v < n1; ++v)
                for (int c = 0; c < n0; ++c)
                    rb.record(t.A0[t.act[t.vcomp[u][v]][c]], t.A0[t.act[u][t.act[v][c]]],
                              {{"u", t.A1[u]}, {"v", t.A1[v]}, {"c", t.A0[c]}});
        rb.begin("u^omega = u(u^omega)");
        for (int u = 0; u < n1; ++u) rb.record(t.A0[t.omegaPow[u]], t.A0[t.act[u][t.omegaPow[u]]], {{"u", t.A1[u]}});
        rb.begin("(u^pi)^omega = u^omega");
        for (int u = 0; u < n1; ++u) rb.record(t.A0[t.omegaPow[t.pipow(u)]], t.A0[t.omegaPow[u]], {{"u", t.A1[u]}});
        rb.begin("(uv)^omega = u((vu)^omega)");
        for (int u = 0; u < n1; ++u)
            for (int v = 0; v < n1; ++v)
                rb.record(t.A0[t.omegaPow[t.vcomp[u][v]]], t.A0[t.act[u][t.omegaPow[t.vcomp[v][u]]]],
                          {{"u", t.A1[u]}, {"v", t.A1[v]}});
        rb.begin("u(x + 0) = u");
        for (int u = 0; u < n1; ++u) rb.record(t.A1[t.sub[u][0][t.zero]], t.A1[u], {{"u", t.A1[u]}});
        rb.begin("u(1 x) = u");
        for (int u = 0; u < n1; ++u) rb.record(t.A1[t.dup[u][0]], t.A1[u], {{"u", t.A1[u]}});
    }

    r.equations.insert(r.equations.begin() + 1, accept);
    r.failures.insert(r.failures.end(), accept_failures.begin(), accept_failures.end());
    return r;
}

}  // namespace forestalg

#endif  // FORESTALG_VALIDATION_HPP
