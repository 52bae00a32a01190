#include "support.hpp"

#include "lpad/error.hpp"
#include "lpad/numeric.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#ifndef LPAD_FIXTURE_DIR
#error "LPAD_FIXTURE_DIR must be defined by the build"
#endif

namespace lpad::testing {

std::string fixture_path(const std::string& name) { return std::string(LPAD_FIXTURE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Program load_program(const std::string& name) { return parse_program(read_file(fixture_path(name))); }

GroundProgram load_restricted(const std::string& name) {
    GroundOptions o;
    o.restrict = parse_restriction(read_file(fixture_path("covid.restrict")));
    return ground(load_program(name), o);
}

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct Pred {
    std::string name;
    std::size_t arity;
};

// Random composition of 10 tenths into `explicit_heads` positive parts plus
// a possibly empty remainder for none.
std::vector<int> tenths(Rng& rng, std::size_t explicit_heads, bool allow_none) {
    for (;;) {
        std::vector<int> w(explicit_heads, 1);
        int left = 10 - static_cast<int>(explicit_heads);
        const int keep = allow_none ? static_cast<int>(pick(rng, 0, static_cast<std::size_t>(left))) : left;
        for (int i = 0; i < keep; ++i)
            ++w[pick(rng, 0, explicit_heads - 1)];
        int sum = 0;
        for (int x : w)
            sum += x;
        if (sum <= 10)
            return w;
    }
}

} // namespace

RandomCase random_case(Rng& rng, const RandomProgramLimits& lim) {
    const std::vector<std::string> all_consts = {"a", "b", "c"};
    const std::size_t k = pick(rng, 1, lim.max_constants);
    const std::vector<std::string> consts(all_consts.begin(), all_consts.begin() + static_cast<long>(k));

    std::ostringstream out;
    std::vector<Pred> preds = {{"d", 1}, {"e", 1}};
    for (const auto& c : consts)
        out << "d(" << c << ").\n";
    for (const auto& c : consts)
        if (coin(rng))
            out << "e(" << c << ").\n";

    auto literal = [&](std::size_t limit, bool head_has_x) {
        const Pred& p = preds[pick(rng, 0, limit - 1)];
        std::string s = (lim.allow_negation && coin(rng, 0.3)) ? "\\+" : "";
        s += p.name;
        if (p.arity == 1)
            s += "(" + ((head_has_x && coin(rng, 0.6)) ? std::string("X") : consts[pick(rng, 0, k - 1)]) + ")";
        return s;
    };
    auto body = [&](std::size_t n, bool head_has_x, std::size_t limit) {
        std::vector<std::string> lits;
        if (head_has_x)
            lits.push_back("d(X)");
        for (std::size_t i = 0; i < n; ++i)
            lits.push_back(literal(limit, head_has_x));
        std::string s;
        for (std::size_t i = 0; i < lits.size(); ++i)
            s += (i ? ", " : "") + lits[i];
        return s;
    };

    std::size_t budget = lim.max_instances;
    const std::size_t n_preds = pick(rng, 2, 5);
    bool any_prob = false;
    for (std::size_t i = 1; i <= n_preds; ++i) {
        const std::size_t visible = preds.size(); // bodies only see earlier predicates
        std::size_t arity = pick(rng, 0, 1);
        bool prob = (!any_prob && i == n_preds) || coin(rng, 0.6);
        if (prob && arity == 1 && budget < k)
            arity = 0;
        if (prob && budget < 1)
            prob = false;
        const std::string name = "q" + std::to_string(i);
        const std::string arg = arity ? "(X)" : "";
        if (prob) {
            any_prob = true;
            const std::size_t per = arity ? k : 1;
            const std::size_t n_clauses = budget >= 2 * per && coin(rng, 0.3) ? 2 : 1;
            const std::size_t n_heads = pick(rng, 1, std::min<std::size_t>(3, lim.max_heads - 1));
            std::vector<std::string> head_names = {name};
            for (std::size_t h = 1; h < n_heads; ++h)
                head_names.push_back("r" + std::to_string(i) + "_" + std::to_string(h));
            for (std::size_t c = 0; c < n_clauses; ++c) {
                budget -= per;
                const auto w = tenths(rng, n_heads, n_heads < lim.max_heads);
                for (std::size_t h = 0; h < n_heads; ++h)
                    out << (h ? "; " : "") << head_names[h] << arg << ":0." << w[h];
                const std::string b = body(pick(rng, 0, 2), arity == 1, visible);
                out << (b.empty() ? "" : " :- " + b) << ".\n";
            }
            for (const auto& hn : head_names)
                preds.push_back({hn, arity});
        } else {
            const std::size_t n_clauses = pick(rng, 1, 2);
            for (std::size_t c = 0; c < n_clauses; ++c)
                out << name << arg << " :- " << body(pick(rng, 1, 3), arity == 1, visible) << ".\n";
            preds.push_back({name, arity});
        }
    }

    RandomCase rc;
    rc.text = out.str();
    // "0.10" denotes one full head here; rewrite it as 1.0.
    for (std::size_t pos; (pos = rc.text.find(":0.10")) != std::string::npos;)
        rc.text.replace(pos, 5, ":1.0");
    rc.program = parse_program(rc.text);
    rc.ground = ground(rc.program);

    for (std::size_t n = 0; n < 3; ++n) {
        Query q;
        const std::size_t len = pick(rng, 1, 2);
        for (std::size_t j = 0; j < len; ++j) {
            const Pred& p = preds[pick(rng, 2, preds.size() - 1)];
            Atom a{p.name, {}};
            if (p.arity)
                a.args.push_back(Term::constant(consts[pick(rng, 0, k - 1)]));
            q.push_back({!(lim.allow_negation && coin(rng, 0.3)), a});
        }
        rc.queries.push_back(std::move(q));
    }
    return rc;
}

EventSpace random_space(Rng& rng, std::size_t n, std::size_t max_heads) {
    EventSpace es;
    for (std::size_t i = 1; i <= n; ++i) {
        InstanceInfo info;
        info.key = {static_cast<int>(i), {}};
        const std::size_t heads = pick(rng, 2, max_heads);
        std::vector<double> w(heads);
        double sum = 0;
        for (auto& x : w)
            sum += (x = 1.0 + static_cast<double>(pick(rng, 0, 8)));
        for (auto& x : w)
            x /= sum;
        info.probs = w;
        es.add(std::move(info));
    }
    return es;
}

namespace {

AtomicChoice random_atomic(Rng& rng, const EventSpace& es) {
    const auto& info = es.instances()[pick(rng, 0, es.size() - 1)];
    return {info.key, static_cast<int>(pick(rng, 1, info.probs.size()))};
}

} // namespace

ChoiceExpr random_expr(Rng& rng, const EventSpace& es, int depth) {
    if (depth <= 0 || coin(rng, 0.25)) {
        if (coin(rng, 0.08))
            return coin(rng) ? ChoiceExpr::top() : ChoiceExpr::bottom();
        return ChoiceExpr::choice(random_atomic(rng, es));
    }
    switch (pick(rng, 0, 2)) {
    case 0: return ChoiceExpr::negation(random_expr(rng, es, depth - 1));
    default: {
        std::vector<ChoiceExpr> kids;
        const std::size_t n = pick(rng, 2, 3);
        for (std::size_t i = 0; i < n; ++i)
            kids.push_back(random_expr(rng, es, depth - 1));
        return coin(rng) ? ChoiceExpr::conj(std::move(kids)) : ChoiceExpr::disj(std::move(kids));
    }
    }
}

CompositeChoice random_composite(Rng& rng, const EventSpace& es, std::size_t max_size, bool force_consistent) {
    CompositeChoice k;
    const std::size_t n = pick(rng, 1, max_size);
    for (std::size_t i = 0; i < n; ++i) {
        AtomicChoice a = random_atomic(rng, es);
        if (force_consistent &&
            std::any_of(k.begin(), k.end(), [&](const AtomicChoice& b) { return b.instance == a.instance; }))
            continue;
        k.insert(a);
    }
    return k;
}

ChoiceFamily random_family(Rng& rng, const EventSpace& es, std::size_t max_members, std::size_t max_size) {
    ChoiceFamily k;
    const std::size_t n = pick(rng, 0, max_members);
    for (std::size_t i = 0; i < n; ++i)
        k.insert(random_composite(rng, es, max_size, true));
    return k;
}

std::vector<Selection> all_selections(const EventSpace& es) {
    std::vector<Selection> out;
    SelectionEnumerator en(es);
    Selection s;
    while (en.next(s))
        out.push_back(s);
    return out;
}

HeadAssignment assignment_of(const Selection& s) {
    HeadAssignment h;
    for (const auto& a : s)
        h[a.instance] = a.head;
    return h;
}

std::vector<bool> covered_mask(const ChoiceFamily& k, const std::vector<Selection>& sel) {
    std::vector<bool> m;
    m.reserve(sel.size());
    for (const auto& s : sel)
        m.push_back(covers(k, s));
    return m;
}

std::vector<bool> truth_mask(const ChoiceExpr& e, const std::vector<Selection>& sel) {
    std::vector<bool> m;
    m.reserve(sel.size());
    for (const auto& s : sel)
        m.push_back(evaluate(e, assignment_of(s)));
    return m;
}

double brute_prob(const Query& q, const GroundProgram& g) {
    const auto es = g.events();
    CompensatedSum sum;
    SelectionEnumerator en(es);
    Selection s;
    while (en.next(s))
        if (model_check(world_of(s, g), q))
            sum.add(world_prob(s, es));
    return sum.value();
}

} // namespace lpad::testing
