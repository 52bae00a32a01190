#pragma once

// Abstract syntax of function-free logic programs with annotated
// disjunctions, together with substitutions, unification and the `.lpad`
// text format.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lpad {

/// A constant or a variable. There are no compound terms.
struct Term {
    enum class Kind : unsigned char { Constant, Variable };

    Kind kind = Kind::Constant;
    std::string name;

    static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
    static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }

    bool is_variable() const noexcept { return kind == Kind::Variable; }
    bool is_constant() const noexcept { return kind == Kind::Constant; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

/// Predicate symbol with its arity, e.g. `covid/1`.
struct Predicate {
    std::string name;
    std::size_t arity = 0;

    std::string to_string() const { return name + "/" + std::to_string(arity); }

    friend bool operator==(const Predicate&, const Predicate&) = default;
    friend auto operator<=>(const Predicate&, const Predicate&) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    Predicate signature() const { return {predicate, args.size()}; }
    std::size_t arity() const noexcept { return args.size(); }
    bool is_ground() const;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
    bool positive = true;
    Atom atom;

    static Literal pos(Atom a) { return {true, std::move(a)}; }
    static Literal neg(Atom a) { return {false, std::move(a)}; }

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Conjunction of literals; the empty query is the success goal.
using Query = std::vector<Literal>;

struct Clause {
    Atom head;
    Query body;

    friend bool operator==(const Clause&, const Clause&) = default;
};

struct ProbHead {
    Atom atom;
    double probability = 0.0;

    friend bool operator==(const ProbHead&, const ProbHead&) = default;
};

/// Name and arity of the implicit head carrying the leftover probability mass.
inline constexpr std::string_view kNonePredicate = "none";

/// `h1:p1; ...; hn:pn :- body.` with an implicit trailing `none` head when
/// the explicit probabilities sum to less than one.
struct ProbClause {
    int id = 0; ///< 1-based, printed as `c<id>`
    std::vector<ProbHead> heads;
    Query body;

    bool has_none() const;
    /// Heads written in the source, i.e. without the implicit `none`.
    std::size_t explicit_heads() const { return heads.size() - (has_none() ? 1 : 0); }
    std::string name() const { return "c" + std::to_string(id); }

    friend bool operator==(const ProbClause&, const ProbClause&) = default;
};

/// `%!read covid(A) as: "A has covid-19"`. A negated pattern (`\+covid(A)`)
/// gives the wording for negative literals.
struct Annotation {
    Atom pattern;
    bool negated = false;
    std::string text;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Program {
    std::vector<ProbClause> prob_clauses;
    std::vector<Clause> derived_clauses;
    std::vector<Annotation> annotations;

    /// Predicates that head some probabilistic clause (`none` excluded).
    std::set<Predicate> probabilistic_predicates() const;
    std::set<Predicate> derived_predicates() const;
    /// Every constant symbol occurring in a clause, sorted.
    std::vector<std::string> constants() const;

    friend bool operator==(const Program&, const Program&) = default;
};

// ---------------------------------------------------------------------------
// Substitutions

class Substitution {
public:
    Substitution() = default;

    /// Adds `var/term`; identity bindings are dropped.
    void bind(const std::string& var, Term term);

    const Term* lookup(const std::string& var) const;
    bool empty() const noexcept { return map_.empty(); }
    std::size_t size() const noexcept { return map_.size(); }
    const std::map<std::string, Term>& bindings() const noexcept { return map_; }

    /// `this ∘ other`: applying the result equals applying `this`, then `other`.
    Substitution then(const Substitution& other) const;
    Substitution restrict_to(const std::vector<std::string>& vars) const;

    /// `{X/p1,Y/p2}`; identity prints as `{}`.
    std::string to_string() const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    std::map<std::string, Term> map_;
};

Term apply(const Substitution& s, const Term& t);
Atom apply(const Substitution& s, const Atom& a);
Literal apply(const Substitution& s, const Literal& l);
Query apply(const Substitution& s, const Query& q);
Clause apply(const Substitution& s, const Clause& c);

/// Most general unifier; `std::nullopt` when the atoms do not unify.
std::optional<Substitution> mgu(const Atom& a, const Atom& b);

/// Variables in order of first occurrence.
std::vector<std::string> variables(const Atom& a);
std::vector<std::string> variables(const Query& q);
std::vector<std::string> variables(const Clause& c);
/// Heads left to right, then the body. This is the order used for grounding
/// tuples such as `[p1,p2]`.
std::vector<std::string> variables(const ProbClause& c);

bool is_ground(const Query& q);

/// Renames every variable of `c` to a fresh `_V<k>`, advancing `counter`.
Clause rename_apart(const Clause& c, int& counter);

// ---------------------------------------------------------------------------
// Range restriction

struct RangeViolation {
    std::string clause; ///< printed clause
    std::vector<std::string> variables;
};

struct RangeReport {
    bool ok = true;
    std::vector<RangeViolation> violations;
};

RangeReport is_range_restricted(const Program& p);

// ---------------------------------------------------------------------------
// Text format

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l); ///< negation printed as `\+`
std::string to_string(const Query& q);   ///< `a, \+b`; empty query prints `true`
std::string to_string(const Clause& c);
std::string to_string(const ProbClause& c);
std::string to_string(const Annotation& a);

/// Shortest decimal text that reads back to the same double.
std::string format_probability(double p);

Program parse_program(std::string_view text);
Query parse_query(std::string_view text);
Atom parse_atom(std::string_view text);

/// Annotations first, then probabilistic clauses, then derived clauses.
/// Implicit `none` heads are not printed.
std::string print_program(const Program& p);

} // namespace lpad
