#ifndef FORESTALG_TESTKIT_SYNTACTIC_SAMPLER_HPP
#define FORESTALG_TESTKIT_SYNTACTIC_SAMPLER_HPP

// Bounded approximation of the syntactic congruence of a forest language:
// finite forests are grouped by their membership behaviour under every
// context with a single hole up to a size bound.

#include <functional>
#include <map>
#include <vector>

#include "forestalg/forest.hpp"
#include "forestalg/testkit/enumerate.hpp"

namespace forestalg::testkit {

using LanguageOracle = std::function<bool(const ForestGraph&)>;

/// Contexts over `alphabet` with exactly one hole x0 and at most
/// `context_bound` other vertices.  The hole may sit at a root.
inline std::vector<ForestGraph> single_hole_contexts(const RankedAlphabet& alphabet, int context_bound)
{
    static const std::string hole = "#hole";
    RankedAlphabet with_hole = alphabet;
    with_hole.add(hole, 0);
    std::vector<ForestGraph> out;
    enum_forests(with_hole, context_bound + 1, [&](const ForestGraph& g) {
        int holes = 0;
        for (const auto& n : g.nodes()) holes += n.label.symbol == hole ? 1 : 0;
        if (holes != 1) return;
        ForestGraph p = g;
        p.set_alphabet(alphabet);
        for (std::size_t v = 0; v < p.size(); ++v)
            if (p.node(static_cast<NodeId>(v)).label.symbol == hole) p.mutable_node(static_cast<NodeId>(v)).label = Label::var(0);
        out.push_back(std::move(p));
    }, 1);
    return out;
}

/// Partition of all forests with at most `size_bound` vertices; classes are
/// listed in order of their first member.
inline std::vector<std::vector<ForestGraph>> syntactic_sampler(const LanguageOracle& in_language,
                                                               const RankedAlphabet& alphabet, int size_bound,
                                                               int context_bound)
{
    auto contexts = single_hole_contexts(alphabet, context_bound);
    std::map<std::vector<bool>, std::size_t> class_of;
    std::vector<std::vector<ForestGraph>> classes;
    enum_forests(alphabet, size_bound, [&](const ForestGraph& s) {
        std::vector<bool> behaviour;
        behaviour.reserve(contexts.size());
        for (const auto& p : contexts) behaviour.push_back(in_language(substitute(p, 0, s)));
        auto [it, fresh] = class_of.try_emplace(behaviour, classes.size());
        if (fresh) classes.emplace_back();
        classes[it->second].push_back(s);
    });
    return classes;
}

}  // namespace forestalg::testkit

#endif  // FORESTALG_TESTKIT_SYNTACTIC_SAMPLER_HPP
