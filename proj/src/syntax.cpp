#include "lpad/syntax.hpp"

#include <algorithm>
#include <charconv>
#include <system_error>

namespace lpad {

bool Atom::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

bool ProbClause::has_none() const {
    return !heads.empty() && heads.back().atom.predicate == kNonePredicate &&
           heads.back().atom.args.empty();
}

std::set<Predicate> Program::probabilistic_predicates() const {
    std::set<Predicate> out;
    for (const auto& c : prob_clauses)
        for (const auto& h : c.heads)
            if (h.atom.predicate != kNonePredicate)
                out.insert(h.atom.signature());
    return out;
}

std::set<Predicate> Program::derived_predicates() const {
    std::set<Predicate> out;
    for (const auto& c : derived_clauses)
        out.insert(c.head.signature());
    return out;
}

namespace {

void collect_constants(const Atom& a, std::set<std::string>& out) {
    for (const auto& t : a.args)
        if (t.is_constant())
            out.insert(t.name);
}

void collect_constants(const Query& q, std::set<std::string>& out) {
    for (const auto& l : q)
        collect_constants(l.atom, out);
}

void push_unique(std::vector<std::string>& out, const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end())
        out.push_back(v);
}

void collect_vars(const Atom& a, std::vector<std::string>& out) {
    for (const auto& t : a.args)
        if (t.is_variable())
            push_unique(out, t.name);
}

void collect_vars(const Query& q, std::vector<std::string>& out) {
    for (const auto& l : q)
        collect_vars(l.atom, out);
}

} // namespace

std::vector<std::string> Program::constants() const {
    std::set<std::string> out;
    for (const auto& c : prob_clauses) {
        for (const auto& h : c.heads)
            collect_constants(h.atom, out);
        collect_constants(c.body, out);
    }
    for (const auto& c : derived_clauses) {
        collect_constants(c.head, out);
        collect_constants(c.body, out);
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Substitutions

void Substitution::bind(const std::string& var, Term term) {
    if (term.is_variable() && term.name == var) {
        map_.erase(var);
        return;
    }
    map_[var] = std::move(term);
}

const Term* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Substitution Substitution::then(const Substitution& other) const {
    Substitution out;
    for (const auto& [var, term] : map_)
        out.bind(var, lpad::apply(other, term));
    for (const auto& [var, term] : other.map_)
        if (!map_.contains(var))
            out.bind(var, term);
    return out;
}

Substitution Substitution::restrict_to(const std::vector<std::string>& vars) const {
    Substitution out;
    for (const auto& v : vars)
        if (const Term* t = lookup(v))
            out.bind(v, *t);
    return out;
}

std::string Substitution::to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [var, term] : map_) {
        if (!first)
            out += ",";
        first = false;
        out += var + "/" + lpad::to_string(term);
    }
    return out + "}";
}

Term apply(const Substitution& s, const Term& t) {
    if (t.is_variable())
        if (const Term* bound = s.lookup(t.name))
            return *bound;
    return t;
}

Atom apply(const Substitution& s, const Atom& a) {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args)
        out.args.push_back(apply(s, t));
    return out;
}

Literal apply(const Substitution& s, const Literal& l) { return {l.positive, apply(s, l.atom)}; }

Query apply(const Substitution& s, const Query& q) {
    Query out;
    out.reserve(q.size());
    for (const auto& l : q)
        out.push_back(apply(s, l));
    return out;
}

Clause apply(const Substitution& s, const Clause& c) { return {apply(s, c.head), apply(s, c.body)}; }

std::optional<Substitution> mgu(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate || a.args.size() != b.args.size())
        return std::nullopt;
    std::map<std::string, Term> bound;
    auto walk = [&bound](Term t) {
        while (t.is_variable()) {
            auto it = bound.find(t.name);
            if (it == bound.end())
                break;
            t = it->second;
        }
        return t;
    };
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        Term x = walk(a.args[i]);
        Term y = walk(b.args[i]);
        if (x == y)
            continue;
        if (x.is_variable())
            bound[x.name] = y;
        else if (y.is_variable())
            bound[y.name] = x;
        else
            return std::nullopt;
    }
    Substitution out;
    for (const auto& entry : bound)
        out.bind(entry.first, walk(Term::variable(entry.first)));
    return out;
}

std::vector<std::string> variables(const Atom& a) {
    std::vector<std::string> out;
    collect_vars(a, out);
    return out;
}

std::vector<std::string> variables(const Query& q) {
    std::vector<std::string> out;
    collect_vars(q, out);
    return out;
}

std::vector<std::string> variables(const Clause& c) {
    std::vector<std::string> out;
    collect_vars(c.head, out);
    collect_vars(c.body, out);
    return out;
}

std::vector<std::string> variables(const ProbClause& c) {
    std::vector<std::string> out;
    for (const auto& h : c.heads)
        collect_vars(h.atom, out);
    collect_vars(c.body, out);
    return out;
}

bool is_ground(const Query& q) {
    return std::all_of(q.begin(), q.end(), [](const Literal& l) { return l.atom.is_ground(); });
}

Clause rename_apart(const Clause& c, int& counter) {
    Substitution fresh;
    for (const auto& v : variables(c))
        fresh.bind(v, Term::variable("_V" + std::to_string(counter++)));
    return apply(fresh, c);
}

// ---------------------------------------------------------------------------
// Range restriction

namespace {

std::vector<std::string> positive_vars(const Query& body) {
    std::vector<std::string> out;
    for (const auto& l : body)
        if (l.positive)
            collect_vars(l.atom, out);
    return out;
}

std::vector<std::string> missing(const std::vector<std::string>& needed,
                                 const std::vector<std::string>& available) {
    std::vector<std::string> out;
    for (const auto& v : needed)
        if (std::find(available.begin(), available.end(), v) == available.end())
            out.push_back(v);
    return out;
}

} // namespace

RangeReport is_range_restricted(const Program& p) {
    RangeReport report;
    auto check = [&report](const std::vector<std::string>& head_vars, const Query& body,
                           std::string text) {
        auto miss = missing(head_vars, positive_vars(body));
        if (!miss.empty()) {
            report.ok = false;
            report.violations.push_back({std::move(text), std::move(miss)});
        }
    };
    for (const auto& c : p.prob_clauses) {
        std::vector<std::string> head_vars;
        for (const auto& h : c.heads)
            collect_vars(h.atom, head_vars);
        check(head_vars, c.body, to_string(c));
    }
    for (const auto& c : p.derived_clauses)
        check(variables(c.head), c.body, to_string(c));
    return report;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Atom& a) {
    std::string out = a.predicate;
    if (!a.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i)
                out += ",";
            out += a.args[i].name;
        }
        out += ")";
    }
    return out;
}

std::string to_string(const Literal& l) { return (l.positive ? "" : "\\+") + to_string(l.atom); }

std::string to_string(const Query& q) {
    if (q.empty())
        return "true";
    std::string out;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(q[i]);
    }
    return out;
}

std::string to_string(const Clause& c) {
    std::string out = to_string(c.head);
    if (!c.body.empty())
        out += " :- " + to_string(c.body);
    return out + ".";
}

std::string format_probability(double p) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, res.ptr);
}

std::string to_string(const ProbClause& c) {
    std::string out;
    const std::size_t n = c.explicit_heads();
    for (std::size_t i = 0; i < n; ++i) {
        if (i)
            out += "; ";
        out += to_string(c.heads[i].atom) + ":" + format_probability(c.heads[i].probability);
    }
    if (!c.body.empty())
        out += " :- " + to_string(c.body);
    return out + ".";
}

std::string to_string(const Annotation& a) {
    std::string quoted;
    for (char ch : a.text) {
        if (ch == '"' || ch == '\\')
            quoted += '\\';
        quoted += ch;
    }
    return std::string("%!read ") + (a.negated ? "\\+" : "") + to_string(a.pattern) + " as: \"" +
           quoted + "\"";
}

std::string print_program(const Program& p) {
    std::string out;
    for (const auto& a : p.annotations)
        out += to_string(a) + "\n";
    for (const auto& c : p.prob_clauses)
        out += to_string(c) + "\n";
    for (const auto& c : p.derived_clauses)
        out += to_string(c) + "\n";
    return out;
}

} // namespace lpad
