#pragma once

// Atomic choices, composite choices and choice expressions, with the set
// operations (complement, mins, hits, duals, gamma) and the rewriting
// operations (simplify, dnf) used by the resolution engine.

#include "lpad/syntax.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lpad {

/// Identifies one ground instance cθ of a probabilistic clause. `theta`
/// holds the values of the clause variables in `variables(ProbClause)` order,
/// so (c2,{X/p1,Y/p2}) becomes {2, [p1,p2]}.
struct InstanceKey {
    int clause = 0;
    std::vector<std::string> theta;

    friend bool operator==(const InstanceKey&, const InstanceKey&) = default;
    friend auto operator<=>(const InstanceKey&, const InstanceKey&) = default;
};

/// `[p1,p2]`; the tuple form used in printed choices and ch/3 atoms.
std::string theta_text(const std::vector<std::string>& theta);
std::vector<std::string> parse_theta_text(std::string_view text);

struct AtomicChoice {
    InstanceKey instance;
    int head = 1; ///< 1-based; the implicit none head is the last index

    friend bool operator==(const AtomicChoice&, const AtomicChoice&) = default;
    friend auto operator<=>(const AtomicChoice&, const AtomicChoice&) = default;
};

using CompositeChoice = std::set<AtomicChoice>;
using ChoiceFamily = std::set<CompositeChoice>;

/// Head distribution of one ground instance.
struct InstanceInfo {
    InstanceKey key;
    std::vector<std::string> vars; ///< clause variables, parallel to key.theta
    std::vector<double> probs;     ///< one per head, none included
    std::vector<Atom> heads;       ///< ground head atoms; may be empty in synthetic spaces
};

/// The independent random variables of a grounding, in grounding order.
class EventSpace {
public:
    void add(InstanceInfo info);

    const InstanceInfo* find(const InstanceKey& key) const;
    /// Throws ProgramError for an unknown instance.
    const InstanceInfo& at(const InstanceKey& key) const;
    std::size_t index_of(const InstanceKey& key) const;
    std::size_t head_count(const InstanceKey& key) const { return at(key).probs.size(); }
    double prob(const AtomicChoice& a) const;
    /// Throws ProgramError unless the instance exists and the head index is in range.
    void check(const AtomicChoice& a) const;

    const std::vector<InstanceInfo>& instances() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }

private:
    std::vector<InstanceInfo> items_;
    std::map<InstanceKey, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Choice expressions

/// Immutable expression tree, cheap to copy. And/Or nodes are flattened and
/// keep their children sorted by the canonical order; building one with no
/// children yields the unit, with one child yields the child.
class ChoiceExpr {
public:
    enum class Kind : unsigned char { False, True, Choice, Not, And, Or };

    ChoiceExpr(); // false

    static ChoiceExpr bottom();
    static ChoiceExpr top();
    static ChoiceExpr choice(AtomicChoice a);
    static ChoiceExpr negation(ChoiceExpr e);
    static ChoiceExpr conj(std::vector<ChoiceExpr> children);
    static ChoiceExpr disj(std::vector<ChoiceExpr> children);
    static ChoiceExpr conj(ChoiceExpr a, ChoiceExpr b) { return conj(std::vector{std::move(a), std::move(b)}); }
    static ChoiceExpr disj(ChoiceExpr a, ChoiceExpr b) { return disj(std::vector{std::move(a), std::move(b)}); }

    Kind kind() const noexcept;
    bool is_false() const noexcept { return kind() == Kind::False; }
    bool is_true() const noexcept { return kind() == Kind::True; }
    /// Kind::Choice only.
    const AtomicChoice& choice() const;
    /// Operand of Not (size 1) or the operands of And/Or.
    const std::vector<ChoiceExpr>& children() const;
    const ChoiceExpr& operand() const { return children().front(); }
    /// Node count.
    std::size_t size() const noexcept;
    /// Leftmost atomic choice in the tree, if any.
    const std::optional<AtomicChoice>& lead() const noexcept;

    /// Canonical total order: leading atomic choice, then node kind
    /// (False < True < Choice < Not < And < Or), then children.
    friend std::strong_ordering operator<=>(const ChoiceExpr& a, const ChoiceExpr& b);
    friend bool operator==(const ChoiceExpr& a, const ChoiceExpr& b);

private:
    struct Node;
    explicit ChoiceExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static ChoiceExpr nary(Kind k, std::vector<ChoiceExpr> children);

    std::shared_ptr<const Node> node_;
};

/// Disjunction of conjunctions of positive atomic choices.
ChoiceExpr from_family(const ChoiceFamily& k);

/// Instances mentioned anywhere in the expression, sorted.
std::vector<InstanceKey> mentioned_instances(const ChoiceExpr& e);
std::vector<InstanceKey> mentioned_instances(const ChoiceFamily& k);

/// Throws ProgramError when some atomic choice is not valid in `es`.
void validate(const ChoiceExpr& e, const EventSpace& es);
void validate(const ChoiceFamily& k, const EventSpace& es);

// ---------------------------------------------------------------------------
// Composite-choice sets

bool consistent(const CompositeChoice& k);
/// Sibling heads of the same instance, none included.
std::set<AtomicChoice> complement(const AtomicChoice& a, const EventSpace& es);
/// Union of the complements of the members.
std::set<AtomicChoice> complement(const CompositeChoice& k, const EventSpace& es);

/// Consistent members that have no proper subset in the input.
ChoiceFamily mins(const std::vector<CompositeChoice>& k);
ChoiceFamily mins(const ChoiceFamily& k);
/// Every way of picking one element from each input set, as a raw list
/// (duplicates and inconsistent sets included). hits([]) = [{}].
std::vector<CompositeChoice> hits(const std::vector<std::set<AtomicChoice>>& sets);
ChoiceFamily otimes(const ChoiceFamily& a, const ChoiceFamily& b);
/// mins(hits(complements of K)), folded one member at a time.
ChoiceFamily duals(const ChoiceFamily& k, const EventSpace& es);
ChoiceFamily gamma(const ChoiceExpr& e, const EventSpace& es);

/// True when some member of `k` is contained in `s`.
bool covers(const ChoiceFamily& k, const CompositeChoice& s);

// ---------------------------------------------------------------------------
// Rewriting

ChoiceExpr simplify(const ChoiceExpr& e, const EventSpace& es);
/// Disjunction of conjunctions of literals (α or ¬α), reduced by the
/// simplification rules, or one of the constants.
ChoiceExpr dnf(const ChoiceExpr& e, const EventSpace& es);

// ---------------------------------------------------------------------------
// Evaluation

/// Head picked for each instance, keyed by instance.
using HeadAssignment = std::map<InstanceKey, int>;

/// Boolean value under a head assignment; every mentioned instance must be assigned.
bool evaluate(const ChoiceExpr& e, const HeadAssignment& heads);

/// Post-order flattening of an expression over a fixed list of instances,
/// for fast repeated evaluation.
class FlatExpr {
public:
    FlatExpr(const ChoiceExpr& e, const std::vector<InstanceKey>& order);

    /// heads[k] is the 1-based head picked for order[k].
    bool eval(const int* heads) const;

private:
    struct Op {
        ChoiceExpr::Kind kind;
        int instance = -1;
        int head = 0;
        std::uint32_t first = 0; // index of first child in child_ids_
        std::uint32_t count = 0;
    };
    std::vector<Op> ops_;
    std::vector<std::uint32_t> child_ids_;
};

inline constexpr std::size_t kEquivInstanceLimit = 20;
inline constexpr std::uint64_t kEquivAssignmentLimit = std::uint64_t{1} << 26;

/// Same truth value under every head assignment to the instances mentioned
/// in either expression. Throws LimitError past the instance limit.
bool equiv(const ChoiceExpr& a, const ChoiceExpr& b, const EventSpace& es,
           std::size_t max_instances = kEquivInstanceLimit);

// ---------------------------------------------------------------------------
// Text

std::string to_string(const AtomicChoice& a); ///< (c2,[p1,p2],1)
std::string to_string(const CompositeChoice& k);
std::string to_string(const ChoiceFamily& k);
/// `(c2,[p1,p2],1) & ~(c3,[p1],1) | ...`; `&` binds tighter than `|`.
std::string to_string(const ChoiceExpr& e);

ChoiceExpr parse_choice_expr(std::string_view text);
/// `{{(c6,[p1],1)},{}}`
ChoiceFamily parse_choice_family(std::string_view text);

} // namespace lpad
