#include "lpad/grounder.hpp"

#include "lpad/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace lpad {

Substitution GroundProbClause::substitution() const {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i)
        s.bind(vars[i], Term::constant(theta[i]));
    return s;
}

EventSpace GroundProgram::events() const {
    EventSpace es;
    for (const auto& g : prob) {
        InstanceInfo info;
        info.key = g.key();
        info.vars = g.vars;
        for (const auto& h : g.instance.heads) {
            info.probs.push_back(h.probability);
            info.heads.push_back(h.atom);
        }
        es.add(std::move(info));
    }
    return es;
}

const GroundProbClause* GroundProgram::find(const InstanceKey& key) const {
    for (const auto& g : prob)
        if (g.clause == key.clause && g.theta == key.theta)
            return &g;
    return nullptr;
}

Program GroundProgram::as_program() const {
    Program p;
    for (const auto& g : prob)
        p.prob_clauses.push_back(g.instance);
    p.derived_clauses = derived;
    p.annotations = annotations;
    return p;
}

std::map<int, std::vector<std::vector<std::string>>> parse_restriction(std::string_view text) {
    std::map<int, std::vector<std::vector<std::string>>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pct = line.find('%'); pct != std::string::npos)
            line.resize(pct);
        std::istringstream words(line);
        std::string name;
        if (!(words >> name))
            continue;
        if (name.size() < 2 || name[0] != 'c' ||
            !std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw ParseError("expected a clause name such as c2, got '" + name + "'", lineno, 1);
        const int id = std::stoi(name.substr(1));
        auto& tuples = out[id];
        // Tuples may contain spaces after commas, so read the rest and split on ']'.
        std::string rest;
        std::getline(words, rest);
        std::string compact;
        for (char c : rest)
            if (c != ' ' && c != '\t' && c != '\r')
                compact += c;
        std::size_t pos = 0;
        while (pos < compact.size()) {
            auto close = compact.find(']', pos);
            if (compact[pos] != '[' || close == std::string::npos)
                throw ParseError("malformed tuple in restriction for " + name, lineno, pos + 1);
            tuples.push_back(parse_theta_text(std::string_view(compact).substr(pos, close - pos + 1)));
            pos = close + 1;
        }
    }
    return out;
}

namespace {

// Calls f for every tuple over `constants` of length n, lexicographically.
void for_each_tuple(std::size_t n, const std::vector<std::string>& constants,
                    const std::function<void(const std::vector<std::string>&)>& f) {
    if (n == 0) {
        f({});
        return;
    }
    if (constants.empty())
        return;
    std::vector<std::size_t> idx(n, 0);
    std::vector<std::string> tuple(n, constants.front());
    for (;;) {
        f(tuple);
        std::size_t i = n;
        while (i > 0 && idx[i - 1] + 1 == constants.size()) {
            idx[i - 1] = 0;
            tuple[i - 1] = constants.front();
            --i;
        }
        if (i == 0)
            return;
        ++idx[i - 1];
        tuple[i - 1] = constants[idx[i - 1]];
    }
}

Substitution bind_all(const std::vector<std::string>& vars, const std::vector<std::string>& values) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i)
        s.bind(vars[i], Term::constant(values[i]));
    return s;
}

ProbClause apply(const Substitution& s, const ProbClause& c) {
    ProbClause out;
    out.id = c.id;
    for (const auto& h : c.heads)
        out.heads.push_back({lpad::apply(s, h.atom), h.probability});
    out.body = lpad::apply(s, c.body);
    return out;
}

} // namespace

GroundProgram ground(const Program& p, const GroundOptions& opts) {
    GroundProgram g;
    g.constants = opts.constants ? *opts.constants : p.constants();
    std::sort(g.constants.begin(), g.constants.end());
    g.constants.erase(std::unique(g.constants.begin(), g.constants.end()), g.constants.end());
    g.annotations = p.annotations;
    g.prob_predicates = p.probabilistic_predicates();

    for (const auto& [id, tuples] : opts.restrict)
        if (std::none_of(p.prob_clauses.begin(), p.prob_clauses.end(),
                         [id = id](const ProbClause& c) { return c.id == id; }))
            throw ProgramError("restriction names c" + std::to_string(id) + ", which is not a probabilistic clause");

    auto need_constants = [&g](const std::vector<std::string>& vars, const std::string& text) {
        if (!vars.empty() && g.constants.empty())
            throw ProgramError("no constants to ground " + text);
    };

    for (const auto& c : p.prob_clauses) {
        const auto vars = variables(c);
        auto emit = [&](const std::vector<std::string>& theta) {
            GroundProbClause gc;
            gc.clause = c.id;
            gc.vars = vars;
            gc.theta = theta;
            gc.instance = apply(bind_all(vars, theta), c);
            g.prob.push_back(std::move(gc));
        };
        if (auto it = opts.restrict.find(c.id); it != opts.restrict.end()) {
            auto tuples = it->second;
            for (const auto& t : tuples)
                if (t.size() != vars.size())
                    throw ProgramError("restriction tuple " + theta_text(t) + " for " + c.name() + " needs " +
                                       std::to_string(vars.size()) + " values");
            std::sort(tuples.begin(), tuples.end());
            tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
            for (const auto& t : tuples)
                emit(t);
        } else {
            need_constants(vars, to_string(c));
            for_each_tuple(vars.size(), g.constants, emit);
        }
    }

    for (const auto& c : p.derived_clauses) {
        const auto vars = variables(c);
        need_constants(vars, to_string(c));
        for_each_tuple(vars.size(), g.constants, [&](const std::vector<std::string>& theta) {
            g.derived.push_back(lpad::apply(bind_all(vars, theta), c));
        });
    }
    return g;
}

// ---------------------------------------------------------------------------
// Relevance and pruning

GroundProgram relevant_subset(const GroundProgram& g, const Query& q) {
    std::map<Atom, std::vector<std::size_t>> derived_by_head;
    std::map<Atom, std::vector<std::size_t>> prob_by_head;
    for (std::size_t i = 0; i < g.derived.size(); ++i)
        derived_by_head[g.derived[i].head].push_back(i);
    for (std::size_t i = 0; i < g.prob.size(); ++i)
        for (const auto& h : g.prob[i].instance.heads)
            prob_by_head[h.atom].push_back(i);

    std::vector<bool> keep_derived(g.derived.size(), false);
    std::vector<bool> keep_prob(g.prob.size(), false);
    std::set<Atom> seen;
    std::deque<Atom> todo;
    auto reach = [&](const Atom& a) {
        if (seen.insert(a).second)
            todo.push_back(a);
    };
    auto visit_body = [&](const Query& body) {
        for (const auto& l : body)
            reach(l.atom);
    };

    for (const auto& l : q) {
        if (l.atom.is_ground()) {
            reach(l.atom);
            continue;
        }
        // A pattern reaches every head it unifies with.
        for (const auto& [head, ids] : derived_by_head)
            if (mgu(l.atom, head))
                reach(head);
        for (const auto& [head, ids] : prob_by_head)
            if (mgu(l.atom, head))
                reach(head);
    }

    while (!todo.empty()) {
        Atom a = std::move(todo.front());
        todo.pop_front();
        if (auto it = derived_by_head.find(a); it != derived_by_head.end())
            for (auto i : it->second)
                if (!keep_derived[i]) {
                    keep_derived[i] = true;
                    visit_body(g.derived[i].body);
                }
        if (auto it = prob_by_head.find(a); it != prob_by_head.end())
            for (auto i : it->second)
                if (!keep_prob[i]) {
                    keep_prob[i] = true;
                    visit_body(g.prob[i].instance.body);
                }
    }

    GroundProgram out;
    out.constants = g.constants;
    out.annotations = g.annotations;
    out.prob_predicates = g.prob_predicates;
    for (std::size_t i = 0; i < g.prob.size(); ++i)
        if (keep_prob[i])
            out.prob.push_back(g.prob[i]);
    for (std::size_t i = 0; i < g.derived.size(); ++i)
        if (keep_derived[i])
            out.derived.push_back(g.derived[i]);
    return out;
}

GroundProgram prune_dead_clauses(const GroundProgram& g) {
    std::set<Atom> derivable;
    auto body_ok = [&derivable](const Query& body) {
        return std::all_of(body.begin(), body.end(),
                           [&derivable](const Literal& l) { return !l.positive || derivable.contains(l.atom); });
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& c : g.derived)
            if (!derivable.contains(c.head) && body_ok(c.body)) {
                derivable.insert(c.head);
                changed = true;
            }
        for (const auto& gc : g.prob) {
            if (!body_ok(gc.instance.body))
                continue;
            for (const auto& h : gc.instance.heads)
                if (h.atom.predicate != kNonePredicate && derivable.insert(h.atom).second)
                    changed = true;
        }
    }
    GroundProgram out;
    out.constants = g.constants;
    out.annotations = g.annotations;
    out.prob_predicates = g.prob_predicates;
    for (const auto& gc : g.prob)
        if (body_ok(gc.instance.body))
            out.prob.push_back(gc);
    for (const auto& c : g.derived)
        if (body_ok(c.body))
            out.derived.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// Stratification

namespace {

struct DepGraph {
    std::vector<Predicate> nodes;
    std::map<Predicate, int> id;
    // edges[h] = (body predicate, negative?)
    std::vector<std::vector<std::pair<int, bool>>> edges;

    int node(const Predicate& p) {
        auto [it, fresh] = id.emplace(p, static_cast<int>(nodes.size()));
        if (fresh) {
            nodes.push_back(p);
            edges.emplace_back();
        }
        return it->second;
    }

    void add_clause(const Atom& head, const Query& body) {
        if (head.predicate == kNonePredicate && head.args.empty())
            return;
        const int h = node(head.signature());
        for (const auto& l : body) {
            const int b = node(l.atom.signature());
            edges[static_cast<std::size_t>(h)].push_back({b, !l.positive});
        }
    }
};

// Tarjan; components come out dependencies-first.
std::vector<std::vector<int>> components(const DepGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<int>> out;
    int counter = 0;
    std::function<void(int)> dfs = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (auto [w, neg] : g.edges[static_cast<std::size_t>(v)]) {
            (void)neg;
            if (index[w] < 0) {
                dfs(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            out.push_back(std::move(comp));
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0)
            dfs(v);
    return out;
}

// Path from `from` to `to` inside one component, both ends included.
std::vector<int> path_within(const DepGraph& g, const std::vector<int>& comp_of, int from, int to) {
    std::map<int, int> parent{{from, from}};
    std::deque<int> todo{from};
    while (!todo.empty()) {
        int v = todo.front();
        todo.pop_front();
        if (v == to)
            break;
        for (auto [w, neg] : g.edges[static_cast<std::size_t>(v)]) {
            (void)neg;
            if (comp_of[w] == comp_of[from] && !parent.contains(w)) {
                parent[w] = v;
                todo.push_back(w);
            }
        }
    }
    std::vector<int> path{to};
    for (int v = to; v != from; v = parent.at(v))
        path.push_back(parent.at(v));
    std::reverse(path.begin(), path.end());
    return path;
}

Stratification stratify_graph(const DepGraph& g) {
    Stratification s;
    const auto comps = components(g);
    std::vector<int> comp_of(g.nodes.size(), -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (int v : comps[c])
            comp_of[static_cast<std::size_t>(v)] = static_cast<int>(c);

    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        for (auto [w, neg] : g.edges[v])
            if (neg && comp_of[static_cast<std::size_t>(w)] == comp_of[v]) {
                s.ok = false;
                // v depends negatively on w; close the loop w ... v.
                std::vector<int> back = (static_cast<std::size_t>(w) == v)
                                            ? std::vector<int>{w}
                                            : path_within(g, comp_of, w, static_cast<int>(v));
                s.cycle.push_back(g.nodes[v]);
                for (int x : back)
                    s.cycle.push_back(g.nodes[static_cast<std::size_t>(x)]);
                if (s.cycle.back() != s.cycle.front())
                    s.cycle.push_back(s.cycle.front());
                return s;
            }

    std::vector<int> comp_stratum(comps.size(), 0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        int level = 0;
        for (int v : comps[c])
            for (auto [w, neg] : g.edges[static_cast<std::size_t>(v)]) {
                const auto d = comp_of[static_cast<std::size_t>(w)];
                if (d != static_cast<int>(c))
                    level = std::max(level, comp_stratum[static_cast<std::size_t>(d)] + (neg ? 1 : 0));
            }
        comp_stratum[c] = level;
    }
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        s.strata[g.nodes[v]] = comp_stratum[static_cast<std::size_t>(comp_of[v])];
    return s;
}

} // namespace

Stratification stratify(const GroundProgram& g) {
    DepGraph graph;
    for (const auto& gc : g.prob)
        for (const auto& h : gc.instance.heads)
            graph.add_clause(h.atom, gc.instance.body);
    for (const auto& c : g.derived)
        graph.add_clause(c.head, c.body);
    return stratify_graph(graph);
}

Stratification stratify(const Program& p) {
    DepGraph graph;
    for (const auto& c : p.prob_clauses)
        for (const auto& h : c.heads)
            graph.add_clause(h.atom, c.body);
    for (const auto& c : p.derived_clauses)
        graph.add_clause(c.head, c.body);
    return stratify_graph(graph);
}

std::string cycle_text(const std::vector<Predicate>& cycle) {
    std::string out;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i)
            out += " -> ";
        out += cycle[i].to_string();
    }
    return out;
}

void require_stratified(const GroundProgram& g) {
    auto s = stratify(g);
    if (!s.ok)
        throw ProgramError("program is not stratified: negative cycle " + cycle_text(s.cycle));
}

} // namespace lpad
