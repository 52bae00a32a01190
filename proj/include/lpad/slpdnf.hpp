#pragma once

// SLPDNF-trees: SLDNF resolution over a ground program where every node
// carries a choice expression describing the worlds it holds in.

#include "lpad/choice.hpp"
#include "lpad/grounder.hpp"
#include "lpad/syntax.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lpad {

enum class Marking { Unmarked, Success, Failed, Floundered };
const char* to_string(Marking m);

using NodeId = std::size_t;
using TreeId = std::size_t;

struct EdgeLabel {
    enum class Kind { Derived, Choice, Negation };

    Kind kind = Kind::Derived;
    Substitution sigma;
    std::optional<AtomicChoice> choice; ///< Kind::Choice
    std::optional<ChoiceExpr> expr;     ///< Kind::Negation: the expression C_a conjoined in the step
    /// Index into GroundProgram::derived or GroundProgram::prob (not for negation).
    std::size_t clause = 0;
};

struct SlpdnfNode {
    Query query;
    ChoiceExpr expr;
    Marking marking = Marking::Unmarked;
    struct Child {
        EdgeLabel edge;
        NodeId node;
    };
    std::vector<Child> children;
    /// Tree resolving the selected negative literal, when there is one.
    std::optional<TreeId> subsidiary;
    std::optional<NodeId> parent;
    std::size_t depth = 0;
};

struct SlpdnfTree {
    struct Root {
        NodeId root = 0;
        std::optional<Atom> atom; ///< the negated atom of a subsidiary tree
    };

    Query query;
    std::vector<SlpdnfNode> nodes;
    std::vector<Root> trees; ///< trees[0] is the main tree
    std::map<Atom, TreeId> subs;

    const SlpdnfNode& node(NodeId id) const { return nodes.at(id); }
    NodeId root() const { return trees.front().root; }
    /// Success leaves of one tree, left to right.
    std::vector<NodeId> success_leaves(TreeId t = 0) const;
    std::vector<ChoiceExpr> success_exprs(TreeId t = 0) const;
    /// Root-first path to a node.
    std::vector<NodeId> path_to(NodeId leaf) const;
};

/// Enumeration bounds; exceeding either raises LimitError.
struct EngineOptions {
    std::size_t max_depth = 10000;
    std::size_t max_nodes = 2000000;
};

/// Leftmost selection rule; children in clause order, then head index.
/// Throws ProgramError when a negative literal needs its own subsidiary tree.
SlpdnfTree build_tree(const Query& q, const GroundProgram& g, const EngineOptions& opts = {});

struct Answer {
    Substitution cas; ///< restricted to var(Q)
    ChoiceExpr expr;
    NodeId leaf = 0;
};

std::vector<Answer> answers(const SlpdnfTree& t);

struct DerivationStep {
    Query query;
    ChoiceExpr expr;
    std::optional<EdgeLabel> edge; ///< to the next step; absent on the last one
    std::optional<TreeId> subsidiary;
};

/// A root-to-success branch of the main tree. Its subsidiary trees stay in
/// the owning SlpdnfTree; the steps alone are enough for probabilities and
/// for explanation trees.
struct Derivation {
    Query query;
    Substitution cas;
    ChoiceExpr expr;
    std::vector<DerivationStep> steps;
    NodeId leaf = 0;
};

std::vector<Derivation> derivations(const SlpdnfTree& t);

/// Union of gamma over the success-leaf expressions of the main tree.
ChoiceFamily expl(const SlpdnfTree& t, const EventSpace& es);
ChoiceFamily expl(const Query& q, const GroundProgram& g, const EngineOptions& opts = {});

/// Disjunction of the main tree's success-leaf expressions.
ChoiceExpr success_expr(const SlpdnfTree& t);

/// Nested-record dump; subsidiary trees listed after the main tree.
std::string tree_to_json(const SlpdnfTree& t);
/// Graph description; dotted edges point to subsidiary trees.
std::string tree_to_dot(const SlpdnfTree& t);

} // namespace lpad
