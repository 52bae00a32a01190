#pragma once

// Proofs as AND-trees of ground literals, and their renderings.

#include "lpad/choice.hpp"
#include "lpad/grounder.hpp"
#include "lpad/semantics.hpp"
#include "lpad/slpdnf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lpad {

/// Choice expression with each α = (c,θ,i) shown as its head atom h_iθ.
struct ReadableExpr {
    enum class Kind { True, False, Literal, Not, And, Or };

    Kind kind = Kind::True;
    bool positive = true;               ///< Literal
    Atom atom;                          ///< Literal; `none` for the implicit head
    std::optional<AtomicChoice> origin; ///< Literal
    std::vector<ReadableExpr> children;

    friend bool operator==(const ReadableExpr&, const ReadableExpr&) = default;
};

/// Leafwise α ↦ h_iθ, then occurrences of ¬negated_atom replaced by true
/// and the result contracted (a conjunction left empty is true, a
/// disjunction with a true member is true).
ReadableExpr chq(const ChoiceExpr& e, const EventSpace& es, const std::optional<Atom>& negated_atom = std::nullopt);

/// `(\+ffp2(p1) & \+vaccinated(p1)) | ...`
std::string to_string(const ReadableExpr& e);

struct AndTree {
    Literal label;
    std::vector<AndTree> children;
    /// Negative nodes only: the chq image labelling the edge to their □ child.
    std::optional<ReadableExpr> expr;

    bool is_negative() const { return !label.positive; }
};

/// The derivation with the full composed substitution applied to every
/// query. Throws Error if some query is still non-ground.
Derivation backpropagate(const Derivation& d);

/// One tree per literal of the query; `d` must be backpropagated.
std::vector<AndTree> and_tree(const Derivation& d, const EventSpace& es);

struct Explanation {
    std::vector<AndTree> roots;
    double probability = 0.0;
    ChoiceExpr expr;
    std::size_t leaf_order = 0; ///< position among the success leaves
};

/// Proofs sorted by probability, highest first; ties keep leaf order.
std::vector<Explanation> explain(const Query& q, const GroundProgram& g, const EngineOptions& opts = {},
                                 const ProbOptions& prob = {});

struct RenderOptions {
    std::optional<std::size_t> fold_depth; ///< nodes at this depth hide their subtrees
    bool alternatives = false;             ///< list sibling heads after negated head atoms
};

/// Three-space indent per level, `;` between disjuncts of a negative node.
std::string render_text(const std::vector<AndTree>& roots, const EventSpace& es, const RenderOptions& opts = {});
std::string render_nl(const std::vector<AndTree>& roots, const std::vector<Annotation>& annotations,
                      const EventSpace& es, const RenderOptions& opts = {});
/// One DOT digraph; each root (and each proof, when several are passed) is
/// its own component.
std::string render_graph(const std::vector<std::vector<AndTree>>& proofs);
std::string render_json(const Query& q, const std::vector<Explanation>& proofs);

/// Sentence for one ground literal, from the first matching annotation.
std::string literal_sentence(const Literal& l, const std::vector<Annotation>& annotations);

} // namespace lpad
