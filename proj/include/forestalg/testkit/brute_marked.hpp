#ifndef FORESTALG_TESTKIT_BRUTE_MARKED_HPP
#define FORESTALG_TESTKIT_BRUTE_MARKED_HPP

// Marked reachability by enumerating every finite forest over the generators
// with marked c-leaves.  Forest values are computed bottom-up by evaluating
// small forests whose vertices carry the values of the parts (the product is
// associative, so this equals evaluating the whole forest); every forest up
// to the size bound is visited.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/testkit/enumerate.hpp"

namespace forestalg::testkit {

/// Triples (value, min(#marks, cap), some root is a mark) over all forests
/// with at most `size_bound` vertices (marks included).  With cap 0 no
/// marks are placed.
inline std::set<std::tuple<std::string, int, bool>> brute_marked(const Algebra& alg, const std::string& c, int cap,
                                                                  int size_bound)
{
    const auto& pres = alg.presentation();
    static const std::string mark = "#mark";
    RankedAlphabet labels;
    for (const auto& gname : pres.generators) {
        int ar = *pres.arity_of(gname);
        if (ar > 1) throw AlgebraError(AlgebraError::Kind::Malformed, "brute_marked needs generators of arity <= 1");
        labels.add(gname, ar);
    }
    if (cap > 0) labels.add(mark, 0);

    struct Info {
        std::string value;
        int marks;
        bool is_mark;
    };
    std::map<const detail::Tree*, Info> trees;
    std::map<std::vector<std::string>, std::string> sums;
    std::map<std::pair<std::string, std::string>, std::string> applied;

    auto sum_value = [&](const std::vector<std::string>& parts) -> const std::string& {
        auto it = sums.find(parts);
        if (it != sums.end()) return it->second;
        return sums.emplace(parts, alg.evaluate(build::leaves(parts), 0)).first->second;
    };
    std::function<const Info&(const detail::Tree&)> tree_info = [&](const detail::Tree& t) -> const Info& {
        auto it = trees.find(&t);
        if (it != trees.end()) return it->second;
        Info info;
        if (t.label == mark) {
            info = {c, 1, true};
        } else if (t.groups.empty()) {
            info = {t.label, 0, false};
        } else {
            std::vector<std::string> parts;
            int marks = 0;
            for (const auto& child : t.groups[0]) {
                const auto& ci = tree_info(*child);
                parts.push_back(ci.value);
                marks += ci.marks;
            }
            const auto& inner = sum_value(parts);
            auto key = std::make_pair(t.label, inner);
            auto ap = applied.find(key);
            if (ap == applied.end()) ap = applied.emplace(key, alg.evaluate(build::apply(t.label, {inner}), 0)).first;
            info = {ap->second, std::min(marks, cap), false};
        }
        return trees.emplace(&t, info).first->second;
    };

    std::set<std::tuple<std::string, int, bool>> out;
    detail::ForestEnumerator en(labels);
    for (int n = 0; n <= size_bound; ++n)
        en.forests(n, [&](const std::vector<detail::TreePtr>& f) {
            std::vector<std::string> parts;
            int marks = 0;
            bool root_mark = false;
            for (const auto& t : f) {
                const auto& ti = tree_info(*t);
                parts.push_back(ti.value);
                marks += ti.marks;
                root_mark = root_mark || ti.is_mark;
            }
            out.emplace(sum_value(parts), std::min(marks, cap), root_mark);
        });
    return out;
}

}  // namespace forestalg::testkit

#endif  // FORESTALG_TESTKIT_BRUTE_MARKED_HPP
