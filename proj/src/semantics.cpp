#include "lpad/semantics.hpp"

#include "lpad/error.hpp"
#include "lpad/numeric.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace lpad {

std::string format_trimmed(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", x);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0')
            s.pop_back();
        if (s.back() == '.')
            s.pop_back();
    }
    if (s == "-0")
        s = "0";
    return s;
}

SelectionEnumerator::SelectionEnumerator(const EventSpace& es, std::optional<std::vector<InstanceKey>> over,
                                         std::uint64_t limit) {
    if (over) {
        keys_ = std::move(*over);
    } else {
        for (const auto& info : es.instances())
            keys_.push_back(info.key);
    }
    for (const auto& k : keys_)
        radix_.push_back(static_cast<int>(es.head_count(k)));
    total_ = kernels::assignment_count(radix_, limit);
}

bool SelectionEnumerator::next(Selection& out) {
    if (at_ >= total_)
        return false;
    std::vector<int> heads(radix_.size() + 1);
    kernels::decode(at_++, radix_, heads.data());
    out.clear();
    for (std::size_t i = 0; i < keys_.size(); ++i)
        out.insert({keys_[i], heads[i]});
    return true;
}

World world_of(const Selection& s, const GroundProgram& g) {
    World w;
    w.origin = s;
    for (const auto& a : s) {
        const auto* gc = g.find(a.instance);
        if (!gc)
            throw ProgramError("selection mentions unknown instance " + to_string(a));
        const auto& h = gc->instance.heads.at(static_cast<std::size_t>(a.head - 1));
        if (h.atom.predicate == kNonePredicate && h.atom.args.empty())
            continue;
        w.clauses.push_back({h.atom, gc->instance.body});
    }
    if (s.size() != g.prob.size())
        throw ProgramError("selection is not total: " + std::to_string(s.size()) + " of " +
                           std::to_string(g.prob.size()) + " instances chosen");
    w.clauses.insert(w.clauses.end(), g.derived.begin(), g.derived.end());
    return w;
}

double world_prob(const Selection& s, const EventSpace& es) {
    double p = 1.0;
    for (const auto& a : s)
        p *= es.prob(a);
    return p;
}

bool model_check(const World& w, const Query& q) {
    if (!is_ground(q))
        throw ProgramError("model checking needs a ground query, got " + to_string(q));
    GroundProgram as_ground;
    as_ground.derived = w.clauses;
    const auto strat = stratify(as_ground);
    if (!strat.ok)
        throw ProgramError("world is not stratified: negative cycle " + cycle_text(strat.cycle));
    int top = 0;
    for (const auto& [pred, s] : strat.strata)
        top = std::max(top, s);

    std::set<Atom> truth;
    for (int level = 0; level <= top; ++level) {
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& c : w.clauses) {
                if (strat.strata.at(c.head.signature()) != level || truth.contains(c.head))
                    continue;
                const bool fire = std::all_of(c.body.begin(), c.body.end(), [&truth](const Literal& l) {
                    return truth.contains(l.atom) == l.positive;
                });
                if (fire) {
                    truth.insert(c.head);
                    changed = true;
                }
            }
        }
    }
    return std::all_of(q.begin(), q.end(),
                       [&truth](const Literal& l) { return truth.contains(l.atom) == l.positive; });
}

GroundProgram oracle_grounding(const GroundProgram& g, const Query& q) {
    return relevant_subset(prune_dead_clauses(g), q);
}

double success_prob(const Query& q, const GroundProgram& g, Strategy s, const ProbOptions& opts) {
    if (!is_ground(q))
        throw ProgramError("success probability needs a ground query, got " + to_string(q));
    if (s == Strategy::Oracle) {
        const kernels::CompiledProgram compiled(oracle_grounding(g, q));
        return kernels::query_prob(compiled, q, opts.exec, opts.limit);
    }
    require_stratified(g);
    const auto tree = build_tree(q, g, opts.engine);
    return event_prob(success_expr(tree), g.events(), opts);
}

double event_prob(const ChoiceExpr& e, const EventSpace& es, const ProbOptions& opts) {
    if (e.is_false())
        return 0.0;
    if (e.is_true())
        return 1.0;
    return kernels::expr_prob(e, mentioned_instances(e), es, opts.exec, opts.limit);
}

double derivation_prob(const Derivation& d, const EventSpace& es, const ProbOptions& opts) {
    return event_prob(d.expr, es, opts);
}

} // namespace lpad
