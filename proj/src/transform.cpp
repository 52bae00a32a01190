#include "lpad/transform.hpp"

#include "lpad/error.hpp"

namespace lpad {

Atom ch_atom(const AtomicChoice& a) {
    return Atom{std::string(kChPredicate),
                {Term::constant("c" + std::to_string(a.instance.clause)), Term::constant(theta_text(a.instance.theta)),
                 Term::constant(std::to_string(a.head))}};
}

namespace {

std::string render(const Goal& g, int ctx) {
    using K = Goal::Kind;
    switch (g.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Atom: return to_string(g.atom);
    case K::Not: return "\\+" + render(g.children.front(), 2);
    case K::And:
    case K::Or: {
        const bool conj = g.kind == K::And;
        std::string s;
        for (std::size_t i = 0; i < g.children.size(); ++i) {
            if (i)
                s += conj ? ", " : " ; ";
            s += render(g.children[i], conj ? 1 : 0);
        }
        const bool paren = conj ? ctx >= 2 : ctx >= 1;
        return paren ? "(" + s + ")" : s;
    }
    }
    return {};
}

} // namespace

std::string to_string(const Goal& g) { return render(g, 0); }

Program trp(const GroundProgram& g) {
    Program out;
    int next_id = 1;
    for (const auto& gc : g.prob) {
        ProbClause c;
        c.id = next_id++;
        for (std::size_t i = 0; i < gc.instance.heads.size(); ++i) {
            const auto& h = gc.instance.heads[i];
            const bool none = h.atom.predicate == kNonePredicate && h.atom.args.empty();
            c.heads.push_back({none ? h.atom : ch_atom({gc.key(), static_cast<int>(i + 1)}), h.probability});
        }
        out.prob_clauses.push_back(std::move(c));
    }
    return out;
}

Goal trc(const ChoiceExpr& e) {
    using K = ChoiceExpr::Kind;
    Goal g;
    switch (e.kind()) {
    case K::False: g.kind = Goal::Kind::False; break;
    case K::True: g.kind = Goal::Kind::True; break;
    case K::Choice:
        g.kind = Goal::Kind::Atom;
        g.atom = ch_atom(e.choice());
        break;
    case K::Not:
    case K::And:
    case K::Or:
        g.kind = e.kind() == K::Not ? Goal::Kind::Not : e.kind() == K::And ? Goal::Kind::And : Goal::Kind::Or;
        for (const auto& c : e.children())
            g.children.push_back(trc(c));
        break;
    }
    return g;
}

namespace {

class Desugarer {
public:
    DesugaredGoal run(const Goal& g) {
        DesugaredGoal out;
        out.query = literals(g);
        out.aux = std::move(aux_);
        return out;
    }

private:
    Atom fresh(const char* stem) { return Atom{std::string("trc_") + stem + "_" + std::to_string(counter_++), {}}; }

    // The goal as a conjunction of literals, adding clauses as needed.
    Query literals(const Goal& g) {
        using K = Goal::Kind;
        switch (g.kind) {
        case K::True: return {};
        case K::False: return {Literal::pos(Atom{"trc_false", {}})}; // never defined
        case K::Atom: return {Literal::pos(g.atom)};
        case K::Not: {
            const Goal& inner = g.children.front();
            if (inner.kind == K::Atom)
                return {Literal::neg(inner.atom)};
            return {Literal::neg(define(inner))};
        }
        case K::And: {
            Query q;
            for (const auto& c : g.children) {
                Query part = literals(c);
                q.insert(q.end(), part.begin(), part.end());
            }
            return q;
        }
        case K::Or: return {Literal::pos(define(g))};
        }
        return {};
    }

    // Fresh atom true exactly when g holds.
    Atom define(const Goal& g) {
        const Atom head = fresh(g.kind == Goal::Kind::Or ? "or" : "goal");
        if (g.kind == Goal::Kind::Or) {
            for (const auto& c : g.children)
                aux_.push_back({head, literals(c)});
        } else {
            aux_.push_back({head, literals(g)});
        }
        return head;
    }

    int counter_ = 1;
    std::vector<Clause> aux_;
};

} // namespace

DesugaredGoal desugar(const Goal& g) { return Desugarer().run(g); }

namespace {

// trp leaves the none head implicit, so no ch atom ever names it; choosing
// none is the same as choosing none of the siblings.
ChoiceExpr spell_out_none(const ChoiceExpr& e, const EventSpace& es) {
    using K = ChoiceExpr::Kind;
    switch (e.kind()) {
    case K::False:
    case K::True: return e;
    case K::Choice: {
        const AtomicChoice& a = e.choice();
        const auto& heads = es.at(a.instance).heads;
        const auto i = static_cast<std::size_t>(a.head - 1);
        if (i >= heads.size() || heads[i].predicate != kNonePredicate || !heads[i].args.empty())
            return e;
        std::vector<ChoiceExpr> others;
        for (std::size_t j = 0; j < heads.size(); ++j)
            if (j != i)
                others.push_back(ChoiceExpr::negation(ChoiceExpr::choice({a.instance, static_cast<int>(j + 1)})));
        return ChoiceExpr::conj(std::move(others));
    }
    case K::Not: return ChoiceExpr::negation(spell_out_none(e.operand(), es));
    case K::And:
    case K::Or: {
        std::vector<ChoiceExpr> cs;
        for (const auto& c : e.children())
            cs.push_back(spell_out_none(c, es));
        return e.kind() == K::And ? ChoiceExpr::conj(std::move(cs)) : ChoiceExpr::disj(std::move(cs));
    }
    }
    return e;
}

} // namespace

double prob_via_transform(const ChoiceExpr& e, const GroundProgram& g, const ProbOptions& opts) {
    const EventSpace es = g.events();
    validate(e, es);
    Program p = trp(g);
    DesugaredGoal d = desugar(trc(spell_out_none(e, es)));
    p.derived_clauses = std::move(d.aux);
    const GroundProgram flat = ground(p);
    return success_prob(d.query, flat, Strategy::Oracle, opts);
}

} // namespace lpad
