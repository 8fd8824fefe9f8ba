// forestalg: command-line front end.
//
// Exit codes: 0 pass / true, 1 fail / false, 2 error.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "forestalg/forestalg.hpp"

using namespace forestalg;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

struct Options {
    bool json = false;
    std::string semantics = "inclusive";
    int k = 1;
    int m = 0;
    std::string mode;
    int samples = 1000;
    std::string formula;
    std::string forest;
    std::string check_kind;
    std::vector<std::string> inputs;
};

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// A path to a forest file, or forest term notation.
ForestGraph read_forest(const std::string& arg)
{
    if (std::filesystem::is_regular_file(arg)) return load_forest(arg);
    try {
        return parse_term(arg);
    } catch (const ForestError& e) {
        throw ForestError("'" + arg + "' is neither a readable forest file nor a forest term (" + e.what() + ")");
    }
}

struct LoadedAlgebra {
    Algebra alg;
    std::map<std::string, std::string> letters;  // alphabet letter -> element
};

LoadedAlgebra read_algebra(const std::string& path)
{
    json j;
    try {
        j = read_json_file(path);
    } catch (const ForestError& e) {
        throw AlgebraError(AlgebraError::Kind::Malformed, e.what());
    }
    std::map<std::string, std::string> letters;
    if (j.contains("letters")) letters = j.at("letters").get<std::map<std::string, std::string>>();
    return {Algebra(presentation_from_json(j)), letters};
}

// Maps alphabet letters that are not elements through the letter map.
ForestGraph to_elements(const LoadedAlgebra& la, const ForestGraph& g)
{
    ForestGraph out = g;
    for (std::size_t v = 0; v < out.size(); ++v) {
        auto& label = out.mutable_node(static_cast<NodeId>(v)).label;
        if (label.is_variable() || la.alg.alphabet().arity_of(label.symbol)) continue;
        auto it = la.letters.find(label.symbol);
        if (it != la.letters.end()) label.symbol = it->second;
    }
    out.set_alphabet(la.alg.alphabet());
    return out;
}

void print_report(const EquationReport& r, const Options& opt)
{
    if (opt.json) {
        print_json(r.to_json());
        return;
    }
    std::cout << "check: " << r.check;
    if (r.k) std::cout << " (k = " << *r.k << ")";
    std::cout << '\n';
    if (r.K) std::cout << "K = " << *r.K << '\n';
    if (!r.mode.empty()) std::cout << "mode: " << r.mode << '\n';
    for (const auto& n : r.notes) std::cout << "note: " << n << '\n';
    for (const auto& e : r.equations)
        std::cout << "  " << (e.failures ? "FAIL " : "ok   ") << e.equation << "  (" << e.instances << " instances"
                  << (e.failures ? ", " + std::to_string(e.failures) + " failing" : std::string()) << ")\n";
    for (const auto& f : r.failures)
        std::cout << "witness: " << f.equation << " fails at " << f.instance.dump() << ": " << f.lhs << " != " << f.rhs
                  << '\n';
    std::cout << "verdict: " << r.verdict() << '\n';
}

int cmd_validate(const Options& opt)
{
    const auto& path = opt.inputs.at(0);
    json j = read_json_file(path);
    if (j.contains("automata")) {
        auto la = read_algebra(path);
        ValidationOptions vo;
        vo.samples = opt.samples;
        auto r = validate_presentation(la.alg, vo);
        print_report(r, opt);
        return r.passed() ? kPass : kFail;
    }
    auto g = forest_from_json(j);
    auto violations = validate(g);
    if (opt.json) {
        json vs = json::array();
        for (const auto& v : violations) vs.push_back({{"kind", to_string(v.kind)}, {"node", v.node}, {"message", v.message}});
        print_json({{"check", "forest"}, {"verdict", violations.empty() ? "pass" : "fail"}, {"violations", vs}});
    } else {
        for (const auto& v : violations) std::cout << to_string(v.kind) << ": " << v.message << '\n';
        std::cout << "verdict: " << (violations.empty() ? "pass" : "fail") << '\n';
    }
    return violations.empty() ? kPass : kFail;
}

int cmd_eval(const Options& opt)
{
    auto la = read_algebra(opt.inputs.at(0));
    auto g = to_elements(la, read_forest(opt.inputs.at(1)));
    auto value = la.alg.evaluate(g);
    int arity = g.arity();
    if (opt.json) {
        json out = {{"value", value}, {"arity", arity}};
        if (arity == 0) out["in_language"] = la.alg.in_language(g);
        print_json(out);
    } else {
        std::cout << value << '\n';
    }
    return kPass;
}

json tables_json(const DerivedTables& t)
{
    return {{"A0", t.A0},         {"A1", t.A1},       {"zero", t.A0[t.zero]}, {"hsum0", t.hsum0},
            {"act", t.act},       {"vcomp", t.vcomp}, {"hsum1", t.hsum1},     {"ext", t.ext},
            {"hplus", t.hplus},   {"omegaPow", t.omegaPow}, {"piExp", t.piExp}};
}

void print_table(const std::string& title, const std::vector<std::vector<int>>& rows, const std::vector<std::string>& row_names,
                 const std::vector<std::string>& col_names, const std::vector<std::string>& values)
{
    std::cout << title << '\n';
    std::size_t w = 1;
    for (const auto& n : row_names) w = std::max(w, n.size());
    for (const auto& n : col_names) w = std::max(w, n.size());
    for (const auto& n : values) w = std::max(w, n.size());
    auto cell = [&](const std::string& s) { std::cout << ' ' << s << std::string(w - s.size(), ' '); };
    cell("");
    for (const auto& c : col_names) cell(c);
    std::cout << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        cell(row_names[r]);
        for (int v : rows[r]) cell(values[static_cast<std::size_t>(v)]);
        std::cout << '\n';
    }
}

int cmd_tables(const Options& opt)
{
    auto la = read_algebra(opt.inputs.at(0));
    auto t = derive_tables(la.alg);
    if (opt.json) {
        print_json(tables_json(t));
        return kPass;
    }
    std::cout << "zero: " << t.A0[t.zero] << '\n';
    print_table("c + d", t.hsum0, t.A0, t.A0, t.A0);
    print_table("u(c)", t.act, t.A1, t.A0, t.A0);
    print_table("u(v(x))", t.vcomp, t.A1, t.A1, t.A1);
    print_table("u(x) + v(x)", t.hsum1, t.A1, t.A1, t.A1);
    print_table("u(x + c)", t.ext, t.A1, t.A0, t.A1);
    print_table("u(x) + c", t.hplus, t.A1, t.A0, t.A1);
    std::cout << "u^omega, u^pi exponent\n";
    for (int u = 0; u < t.n1(); ++u)
        std::cout << ' ' << t.A1[u] << ": " << t.A0[t.omegaPow[u]] << ", " << t.piExp[u] << '\n';
    return kPass;
}

int cmd_K(const Options& opt)
{
    auto la = read_algebra(opt.inputs.at(0));
    long long K = compute_K(la.alg.presentation());
    if (opt.json)
        print_json({{"K", K}});
    else
        std::cout << K << '\n';
    return kPass;
}

int cmd_check(const Options& opt, const CLI::App& sub)
{
    auto la = read_algebra(opt.inputs.at(0));
    EquationReport r;
    if (opt.check_kind == "bisim-invariance") {
        BisimMode mode = BisimMode::Auto;
        if (opt.mode == "full") mode = BisimMode::Full;
        if (opt.mode == "refute-only") mode = BisimMode::RefuteOnly;
        r = check_bisim_invariance(la.alg, mode);
        if (mode == BisimMode::Auto && r.mode == "refute-only")
            std::cerr << "warning: no arity-4 elements listed; running refute-only\n";
    } else if (opt.check_kind == "ef") {
        r = check_ef(la.alg);
    } else if (opt.check_kind == "cef") {
        if (sub.count("--k") == 0) throw std::invalid_argument("check cef needs --k");
        r = check_cefk(la.alg, opt.k);
    } else {
        r = check_cef(la.alg);
    }
    print_report(r, opt);
    return r.passed() ? kPass : kFail;
}

int cmd_modelcheck(const Options& opt)
{
    auto phi = parse_formula(opt.formula);
    auto g = read_forest(opt.forest);
    bool holds = modelcheck(g, phi, parse_semantics(opt.semantics));
    if (opt.json)
        print_json({{"formula", to_string(phi)}, {"semantics", opt.semantics}, {"holds", holds}});
    else
        std::cout << (holds ? "true" : "false") << '\n';
    return holds ? kPass : kFail;
}

int cmd_equiv(const Options& opt)
{
    auto s = read_forest(opt.inputs.at(0));
    auto t = read_forest(opt.inputs.at(1));
    bool eq = equiv(s, t, opt.k, opt.m);
    if (opt.json)
        print_json({{"k", opt.k}, {"m", opt.m}, {"equiv", eq}});
    else
        std::cout << (eq ? "true" : "false") << '\n';
    return eq ? kPass : kFail;
}

int cmd_bisim(const Options& opt)
{
    auto s = read_forest(opt.inputs.at(0));
    auto t = read_forest(opt.inputs.at(1));
    bool eq = bisimilar(s, t);
    if (opt.json)
        print_json({{"bisimilar", eq}});
    else
        std::cout << (eq ? "true" : "false") << '\n';
    return eq ? kPass : kFail;
}

int cmd_types(const Options& opt)
{
    auto g = read_forest(opt.inputs.at(0));
    TypeTable table(opt.k);
    int forest_type = Tp(table, g, opt.m);
    auto per_node = all_tree_types(table, g, opt.m);
    if (opt.json) {
        json roots = json::array();
        for (NodeId r : g.roots()) roots.push_back(table.to_json(per_node.back()[static_cast<std::size_t>(r)]));
        print_json({{"k", opt.k}, {"m", opt.m}, {"forest", table.to_json(forest_type)}, {"roots", roots}});
    } else {
        std::cout << "Tp: " << table.to_text(forest_type) << '\n';
        for (NodeId r : g.roots())
            std::cout << "tp(root " << r << "): " << table.to_text(per_node.back()[static_cast<std::size_t>(r)]) << '\n';
    }
    return kPass;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Forest algebras: evaluation, definability checks, counting bisimulation"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--json", opt.json, "print JSON");

    auto* validate = app.add_subcommand("validate", "check a forest file or an algebra presentation");
    validate->add_option("file", opt.inputs, "forest (.forest) or algebra (.alg) file")->required()->expected(1);
    validate->add_option("--samples", opt.samples, "random nested forests for the monad laws")->check(CLI::PositiveNumber);

    auto* eval = app.add_subcommand("eval", "evaluate a forest in an algebra");
    eval->add_option("files", opt.inputs, "algebra and forest (file or term)")->required()->expected(2);

    auto* tables = app.add_subcommand("tables", "derived operation tables");
    tables->add_option("file", opt.inputs, "algebra")->required()->expected(1);

    auto* K = app.add_subcommand("K", "the constant K = |A0|^(2|A1|) + |A0|");
    K->add_option("file", opt.inputs, "algebra")->required()->expected(1);

    auto* check = app.add_subcommand("check", "decide bisimulation invariance, EF or cEF definability");
    check->add_option("kind", opt.check_kind, "bisim-invariance | ef | cef | cef-auto")
        ->required()
        ->check(CLI::IsMember({"bisim-invariance", "ef", "cef", "cef-auto"}));
    check->add_option("file", opt.inputs, "algebra")->required()->expected(1);
    check->add_option("--k", opt.k, "counting bound for cef")->check(CLI::Range(1, 1 << 30));
    check->add_option("--mode", opt.mode, "bisim-invariance mode")->check(CLI::IsMember({"full", "refute-only"}));

    auto* mc = app.add_subcommand("modelcheck", "evaluate a cEF formula on a regular forest");
    mc->add_option("--formula", opt.formula, "forest formula, e.g. \"E1(Pa)\"")->required();
    mc->add_option("--forest", opt.forest, "forest file or term")->required();
    mc->add_option("--semantics", opt.semantics, "how E_l counts")->check(CLI::IsMember({"inclusive", "literal"}));

    auto* eq = app.add_subcommand("equiv", "counting bisimilarity s ~_k^m t");
    eq->add_option("forests", opt.inputs, "two forests (files or terms)")->required()->expected(2);
    eq->add_option("--k", opt.k, "counting bound")->required()->check(CLI::Range(1, 1 << 30));
    eq->add_option("--m", opt.m, "depth")->required()->check(CLI::NonNegativeNumber);

    auto* bis = app.add_subcommand("bisim", "plain bisimilarity of two forests");
    bis->add_option("forests", opt.inputs, "two forests (files or terms)")->required()->expected(2);

    auto* types = app.add_subcommand("types", "the types Tp_k^m and tp_k^m of a forest");
    types->add_option("forest", opt.inputs, "forest file or term")->required()->expected(1);
    types->add_option("--k", opt.k, "counting bound")->required()->check(CLI::Range(1, 1 << 30));
    types->add_option("--m", opt.m, "depth")->required()->check(CLI::NonNegativeNumber);

    // --json is accepted after the subcommand as well
    for (auto* sub : app.get_subcommands({})) sub->add_flag("--json", opt.json, "print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*validate) return cmd_validate(opt);
        if (*eval) return cmd_eval(opt);
        if (*tables) return cmd_tables(opt);
        if (*K) return cmd_K(opt);
        if (*check) return cmd_check(opt, *check);
        if (*mc) return cmd_modelcheck(opt);
        if (*eq) return cmd_equiv(opt);
        if (*bis) return cmd_bisim(opt);
        if (*types) return cmd_types(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
