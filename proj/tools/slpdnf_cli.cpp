// slpdnf: command-line front end over the lpad library.

#include "lpad/choice.hpp"
#include "lpad/error.hpp"
#include "lpad/explainer.hpp"
#include "lpad/grounder.hpp"
#include "lpad/numeric.hpp"
#include "lpad/semantics.hpp"
#include "lpad/slpdnf.hpp"
#include "lpad/syntax.hpp"
#include "lpad/transform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lpad;

struct Globals {
    std::string constants;
    std::string restrict_file;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string violation_text(const RangeViolation& v) {
    std::string vars;
    for (const auto& x : v.variables)
        vars += (vars.empty() ? "" : ", ") + x;
    return v.clause + " (unbound " + vars + ")";
}

GroundOptions ground_options(const Globals& gl) {
    GroundOptions o;
    if (!gl.constants.empty()) {
        std::vector<std::string> cs;
        std::stringstream ss(gl.constants);
        for (std::string c; std::getline(ss, c, ',');)
            if (!c.empty())
                cs.push_back(c);
        o.constants = std::move(cs);
    }
    if (!gl.restrict_file.empty())
        o.restrict = parse_restriction(slurp(gl.restrict_file));
    return o;
}

GroundProgram load(const std::string& file, const Globals& gl) {
    const Program p = parse_program(slurp(file));
    const auto rr = is_range_restricted(p);
    if (!rr.ok) {
        std::string msg = "program is not range-restricted:";
        for (const auto& v : rr.violations)
            msg += " " + violation_text(v);
        throw ProgramError(msg);
    }
    return ground(p, ground_options(gl));
}

std::string prob_line(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", p);
    return buf;
}

int cmd_check(const std::string& file) {
    const Program p = parse_program(slurp(file));
    bool ok = true;
    const auto rr = is_range_restricted(p);
    for (const auto& v : rr.violations) {
        std::cout << "not range-restricted: " << violation_text(v) << "\n";
        ok = false;
    }
    const auto st = stratify(p);
    if (!st.ok) {
        std::cout << "not stratified: negative cycle " << cycle_text(st.cycle) << "\n";
        ok = false;
    }
    if (ok)
        std::cout << "ok: " << p.prob_clauses.size() << " probabilistic clauses, " << p.derived_clauses.size()
                  << " derived clauses, " << p.annotations.size() << " annotations\n";
    return ok ? 0 : 2;
}

struct ExplainArgs {
    std::string format = "text";
    std::size_t top = 0;
    int fold_depth = -1;
    bool alternatives = false;
    bool relevant = false;
};

int cmd_explain(const std::string& file, const std::string& query, const ExplainArgs& a, const Globals& gl) {
    GroundProgram g = load(file, gl);
    const Query q = parse_query(query);
    if (a.relevant)
        g = relevant_subset(g, q);
    auto proofs = explain(q, g);
    if (a.top && proofs.size() > a.top)
        proofs.resize(a.top);
    if (a.format == "json") {
        std::cout << render_json(q, proofs);
        return 0;
    }
    if (proofs.empty()) {
        std::cout << "no proofs\n";
        return 0;
    }
    if (a.format == "graph") {
        std::vector<std::vector<AndTree>> forest;
        for (const auto& p : proofs)
            forest.push_back(p.roots);
        std::cout << render_graph(forest);
        return 0;
    }
    RenderOptions ro;
    if (a.fold_depth >= 0)
        ro.fold_depth = static_cast<std::size_t>(a.fold_depth);
    ro.alternatives = a.alternatives;
    const auto es = g.events();
    for (std::size_t i = 0; i < proofs.size(); ++i) {
        if (i)
            std::cout << "\n";
        std::cout << "% proof " << i + 1 << "\n";
        std::cout << (a.format == "nl" ? render_nl(proofs[i].roots, g.annotations, es, ro)
                                       : render_text(proofs[i].roots, es, ro));
        std::cout << "p = " << format_trimmed(proofs[i].probability) << "\n";
    }
    return 0;
}

int cmd_prob(const std::string& file, const std::string& query, const std::string& method, const Globals& gl) {
    const GroundProgram g = load(file, gl);
    const Query q = parse_query(query);
    double p = 0;
    if (method == "oracle") {
        p = success_prob(q, g, Strategy::Oracle);
    } else if (method == "engine") {
        p = success_prob(q, g, Strategy::Engine);
    } else {
        require_stratified(g);
        p = prob_via_transform(success_expr(build_tree(q, g)), g);
    }
    std::cout << prob_line(p) << "\n";
    return 0;
}

int cmd_worlds(const std::string& file, const std::vector<std::string>& queries, std::uint64_t limit,
               bool relevant, const Globals& gl) {
    GroundProgram g = load(file, gl);
    std::vector<Query> qs;
    Query all;
    for (const auto& s : queries) {
        qs.push_back(parse_query(s));
        all.insert(all.end(), qs.back().begin(), qs.back().end());
    }
    if (relevant) {
        if (qs.empty())
            throw Error("--relevant needs at least one --query");
        g = oracle_grounding(g, all);
    }
    require_stratified(g);
    const auto es = g.events();
    SelectionEnumerator en(es, std::nullopt, limit);
    std::cout << "% " << en.count() << " worlds over " << es.size() << " instances\n";
    CompensatedSum total;
    Selection s;
    while (en.next(s)) {
        const double p = world_prob(s, es);
        total.add(p);
        std::cout << to_string(s) << "\t" << prob_line(p);
        if (!qs.empty()) {
            const World w = world_of(s, g);
            for (std::size_t i = 0; i < qs.size(); ++i)
                std::cout << "\t" << queries[i] << "=" << (model_check(w, qs[i]) ? "true" : "false");
        }
        std::cout << "\n";
    }
    std::cout << "% total " << prob_line(total.value()) << "\n";
    return 0;
}

int cmd_duals(const std::string& file, const std::string& input, const Globals& gl) {
    const GroundProgram g = load(file, gl);
    const auto es = g.events();
    const auto first = input.find_first_not_of(" \t");
    ChoiceFamily k;
    if (first != std::string::npos && input[first] == '{') {
        k = parse_choice_family(input);
    } else {
        const ChoiceExpr e = parse_choice_expr(input);
        validate(e, es);
        k = gamma(e, es);
    }
    validate(k, es);
    std::cout << to_string(duals(k, es)) << "\n";
    return 0;
}

int cmd_tree(const std::string& file, const std::string& query, const std::string& format, const Globals& gl) {
    const GroundProgram g = load(file, gl);
    require_stratified(g);
    const auto t = build_tree(parse_query(query), g);
    std::cout << (format == "dot" ? tree_to_dot(t) : tree_to_json(t));
    return 0;
}

int cmd_trp(const std::string& file, const Globals& gl) {
    std::cout << print_program(trp(load(file, gl)));
    return 0;
}

int cmd_ground(const std::string& file, const Globals& gl) {
    std::cout << print_program(load(file, gl).as_program());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLPDNF resolution and proof explanation for LPADs"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals gl;
    app.add_option("--constants", gl.constants, "comma-separated constants used for grounding");
    app.add_option("--restrict", gl.restrict_file, "file of allowed groundings, lines like `c2 [p1,p2]`");

    std::string file, query, method = "engine", tree_format = "json", duals_input;
    std::vector<std::string> world_queries;
    std::uint64_t limit = 100000;
    bool world_relevant = false;
    ExplainArgs ex;

    auto* check = app.add_subcommand("check", "parse and check range restriction and stratification");
    check->add_option("file", file)->required();

    auto* expl = app.add_subcommand("explain", "ranked proofs of a ground query");
    expl->add_option("file", file)->required();
    expl->add_option("query", query)->required();
    expl->add_option("--format", ex.format)->check(CLI::IsMember({"text", "nl", "graph", "json"}));
    expl->add_option("--top", ex.top, "keep the k most probable proofs");
    expl->add_option("--fold-depth", ex.fold_depth, "hide the reasons below this depth");
    expl->add_flag("--alternatives", ex.alternatives, "list sibling heads of negated head atoms");
    expl->add_flag("--relevant", ex.relevant, "resolve against the query-relevant grounding only");

    auto* prob = app.add_subcommand("prob", "success probability of a ground query");
    prob->add_option("file", file)->required();
    prob->add_option("query", query)->required();
    prob->add_option("--method", method)->check(CLI::IsMember({"engine", "oracle", "transform"}));

    auto* worlds = app.add_subcommand("worlds", "enumerate selections with their probabilities");
    worlds->add_option("file", file)->required();
    worlds->add_option("--query", world_queries, "ground query to evaluate in each world")->take_all();
    worlds->add_option("--limit", limit, "refuse to enumerate more worlds than this");
    worlds->add_flag("--relevant", world_relevant, "only instances relevant to the queries");

    auto* dual = app.add_subcommand("duals", "dual of a family of composite choices or of an expression");
    dual->add_option("file", file)->required();
    dual->add_option("input", duals_input)->required();

    auto* tree = app.add_subcommand("tree", "dump the resolution tree");
    tree->add_option("file", file)->required();
    tree->add_option("query", query)->required();
    tree->add_option("--format", tree_format)->check(CLI::IsMember({"json", "dot"}));

    auto* trp_cmd = app.add_subcommand("trp", "print the program over ch/3 atoms");
    trp_cmd->add_option("file", file)->required();

    auto* ground_cmd = app.add_subcommand("ground", "print the grounding");
    ground_cmd->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*check)
            return cmd_check(file);
        if (*expl)
            return cmd_explain(file, query, ex, gl);
        if (*prob)
            return cmd_prob(file, query, method, gl);
        if (*worlds)
            return cmd_worlds(file, world_queries, limit, world_relevant, gl);
        if (*dual)
            return cmd_duals(file, duals_input, gl);
        if (*tree)
            return cmd_tree(file, query, tree_format, gl);
        if (*trp_cmd)
            return cmd_trp(file, gl);
        if (*ground_cmd)
            return cmd_ground(file, gl);
    } catch (const lpad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
