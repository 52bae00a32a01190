#pragma once

// Herbrand grounding, relevance filtering and predicate-level
// stratification.

#include "lpad/choice.hpp"
#include "lpad/syntax.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lpad {

/// One ground instance cθ of a probabilistic clause.
struct GroundProbClause {
    int clause = 0;                 ///< source clause id
    std::vector<std::string> vars;  ///< clause variables, first-occurrence order
    std::vector<std::string> theta; ///< their values
    ProbClause instance;            ///< heads and body with θ applied, same id

    InstanceKey key() const { return {clause, theta}; }
    Substitution substitution() const;
};

struct GroundProgram {
    std::vector<GroundProbClause> prob;
    std::vector<Clause> derived;
    std::vector<std::string> constants;
    std::vector<Annotation> annotations;
    /// Probabilistic predicates of the source program, kept even when
    /// filtering removes all of their instances.
    std::set<Predicate> prob_predicates;

    EventSpace events() const;
    const GroundProbClause* find(const InstanceKey& key) const;
    /// The instances and clauses as a printable ground program.
    Program as_program() const;
};

struct GroundOptions {
    /// Replaces the program's constant set when present.
    std::optional<std::vector<std::string>> constants;
    /// Clause id → the only θ tuples to keep for that clause.
    std::map<int, std::vector<std::vector<std::string>>> restrict;
};

/// Lines of the form `c2 [p1,p2] [p2,p3]`; `%` starts a comment.
std::map<int, std::vector<std::vector<std::string>>> parse_restriction(std::string_view text);

/// All instantiations over the constants, source order then lexicographic θ.
GroundProgram ground(const Program& p, const GroundOptions& opts = {});

/// Clauses reachable from the query atoms through the ground-atom call graph
/// (positive and negative body literals). Non-ground query atoms reach every
/// head they unify with.
GroundProgram relevant_subset(const GroundProgram& g, const Query& q);

/// Drops clauses with a positive body atom that no world can derive (an
/// over-approximation that ignores negation). Truth values of every atom are
/// unchanged in every world, so probabilities are preserved.
GroundProgram prune_dead_clauses(const GroundProgram& g);

struct Stratification {
    bool ok = true;
    std::map<Predicate, int> strata;
    /// On failure: a dependency cycle through a negative edge, first
    /// predicate repeated at the end (`p :- \+p.` gives [p/0, p/0]).
    std::vector<Predicate> cycle;
};

Stratification stratify(const GroundProgram& g);
Stratification stratify(const Program& p);

/// Throws ProgramError naming the cycle when `g` is not stratified.
void require_stratified(const GroundProgram& g);

std::string cycle_text(const std::vector<Predicate>& cycle);

} // namespace lpad
