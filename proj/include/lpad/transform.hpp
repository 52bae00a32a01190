#pragma once

// Reduction of derivation probability to query probability: every ground
// instance becomes a bodiless clause over ch/3 atoms, and a choice
// expression becomes a goal over those atoms.

#include "lpad/choice.hpp"
#include "lpad/grounder.hpp"
#include "lpad/semantics.hpp"

#include <string>
#include <vector>

namespace lpad {

inline constexpr std::string_view kChPredicate = "ch";

/// ch(c2,[p1,p2],1)
Atom ch_atom(const AtomicChoice& a);

/// Goal formula over ch atoms, with true/false, negation, `,` and `;`.
struct Goal {
    enum class Kind { True, False, Atom, Not, And, Or };

    Kind kind = Kind::True;
    lpad::Atom atom;
    std::vector<Goal> children;

    friend bool operator==(const Goal&, const Goal&) = default;
};

/// `ch(c1,[p1],1), \+ch(c3,[p1],1) ; ...`
std::string to_string(const Goal& g);

/// One bodiless probabilistic clause per ground instance, clause ids
/// renumbered from 1; the ch atoms keep the original (c, θ).
Program trp(const GroundProgram& g);

Goal trc(const ChoiceExpr& e);

/// A goal as a plain query plus auxiliary derived clauses for `;`, `false`
/// and negated compound goals. Auxiliary predicates are named trc_*.
struct DesugaredGoal {
    Query query;
    std::vector<Clause> aux;
};

DesugaredGoal desugar(const Goal& g);

/// Probability of trc(e) in trp(g), computed by the world-enumeration oracle.
double prob_via_transform(const ChoiceExpr& e, const GroundProgram& g, const ProbOptions& opts = {});

} // namespace lpad
