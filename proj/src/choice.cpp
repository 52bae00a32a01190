#include "lpad/choice.hpp"

#include "lexer.hpp"
#include "lpad/error.hpp"

#include <algorithm>
#include <charconv>

namespace lpad {

// ---------------------------------------------------------------------------
// Keys and event space

std::string theta_text(const std::vector<std::string>& theta) {
    std::string out = "[";
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (i)
            out += ",";
        out += theta[i];
    }
    return out + "]";
}

std::vector<std::string> parse_theta_text(std::string_view text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        throw ParseError("expected a constant list such as [p1,p2]", 1, 1);
    std::vector<std::string> out;
    std::string_view inner = text.substr(1, text.size() - 2);
    while (!inner.empty()) {
        auto comma = inner.find(',');
        out.emplace_back(inner.substr(0, comma));
        if (comma == std::string_view::npos)
            break;
        inner.remove_prefix(comma + 1);
    }
    return out;
}

void EventSpace::add(InstanceInfo info) {
    if (index_.contains(info.key))
        throw ProgramError("duplicate clause instance c" + std::to_string(info.key.clause) +
                           theta_text(info.key.theta));
    index_.emplace(info.key, items_.size());
    items_.push_back(std::move(info));
}

const InstanceInfo* EventSpace::find(const InstanceKey& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &items_[it->second];
}

const InstanceInfo& EventSpace::at(const InstanceKey& key) const {
    if (const InstanceInfo* info = find(key))
        return *info;
    throw ProgramError("unknown clause instance (c" + std::to_string(key.clause) + "," +
                       theta_text(key.theta) + ")");
}

std::size_t EventSpace::index_of(const InstanceKey& key) const {
    at(key);
    return index_.at(key);
}

void EventSpace::check(const AtomicChoice& a) const {
    const auto& info = at(a.instance);
    if (a.head < 1 || static_cast<std::size_t>(a.head) > info.probs.size())
        throw ProgramError("head index out of range in " + to_string(a));
}

double EventSpace::prob(const AtomicChoice& a) const {
    check(a);
    return at(a.instance).probs[static_cast<std::size_t>(a.head - 1)];
}

// ---------------------------------------------------------------------------
// ChoiceExpr

struct ChoiceExpr::Node {
    Kind kind = Kind::False;
    AtomicChoice choice;
    std::vector<ChoiceExpr> children;
    std::optional<AtomicChoice> lead;
    std::size_t size = 1;
};

ChoiceExpr::ChoiceExpr() : ChoiceExpr(bottom()) {}

ChoiceExpr ChoiceExpr::bottom() {
    static const auto node = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::False;
        return std::shared_ptr<const Node>(std::move(n));
    }();
    return ChoiceExpr(node);
}

ChoiceExpr ChoiceExpr::top() {
    static const auto node = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::True;
        return std::shared_ptr<const Node>(std::move(n));
    }();
    return ChoiceExpr(node);
}

ChoiceExpr ChoiceExpr::choice(AtomicChoice a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Choice;
    n->lead = a;
    n->choice = std::move(a);
    return ChoiceExpr(std::move(n));
}

ChoiceExpr ChoiceExpr::negation(ChoiceExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->lead = e.lead();
    n->size = 1 + e.size();
    n->children.push_back(std::move(e));
    return ChoiceExpr(std::move(n));
}

ChoiceExpr ChoiceExpr::nary(Kind k, std::vector<ChoiceExpr> children) {
    std::vector<ChoiceExpr> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        if (c.kind() == k)
            flat.insert(flat.end(), c.children().begin(), c.children().end());
        else
            flat.push_back(std::move(c));
    }
    if (flat.empty())
        return k == Kind::And ? top() : bottom();
    if (flat.size() == 1)
        return flat.front();
    std::sort(flat.begin(), flat.end());
    auto n = std::make_shared<Node>();
    n->kind = k;
    for (const auto& c : flat) {
        n->size += c.size();
        if (!n->lead && c.lead())
            n->lead = c.lead();
    }
    n->children = std::move(flat);
    return ChoiceExpr(std::move(n));
}

ChoiceExpr ChoiceExpr::conj(std::vector<ChoiceExpr> children) { return nary(Kind::And, std::move(children)); }
ChoiceExpr ChoiceExpr::disj(std::vector<ChoiceExpr> children) { return nary(Kind::Or, std::move(children)); }

ChoiceExpr::Kind ChoiceExpr::kind() const noexcept { return node_->kind; }

const AtomicChoice& ChoiceExpr::choice() const {
    if (node_->kind != Kind::Choice)
        throw Error("choice() on a non-atomic expression");
    return node_->choice;
}

const std::vector<ChoiceExpr>& ChoiceExpr::children() const { return node_->children; }
std::size_t ChoiceExpr::size() const noexcept { return node_->size; }
const std::optional<AtomicChoice>& ChoiceExpr::lead() const noexcept { return node_->lead; }

std::strong_ordering operator<=>(const ChoiceExpr& a, const ChoiceExpr& b) {
    if (a.node_ == b.node_)
        return std::strong_ordering::equal;
    // Leading atom first; constants (no atom) sort before everything else.
    if (a.lead().has_value() != b.lead().has_value())
        return a.lead().has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a.lead() && b.lead())
        if (auto c = *a.lead() <=> *b.lead(); c != 0)
            return c;
    if (auto c = a.kind() <=> b.kind(); c != 0)
        return c;
    switch (a.kind()) {
    case ChoiceExpr::Kind::False:
    case ChoiceExpr::Kind::True:
    case ChoiceExpr::Kind::Choice: return std::strong_ordering::equal;
    default: break;
    }
    const auto& x = a.children();
    const auto& y = b.children();
    return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

bool operator==(const ChoiceExpr& a, const ChoiceExpr& b) { return (a <=> b) == 0; }

ChoiceExpr from_family(const ChoiceFamily& k) {
    std::vector<ChoiceExpr> disjuncts;
    for (const auto& kappa : k) {
        std::vector<ChoiceExpr> lits;
        for (const auto& a : kappa)
            lits.push_back(ChoiceExpr::choice(a));
        disjuncts.push_back(ChoiceExpr::conj(std::move(lits)));
    }
    return ChoiceExpr::disj(std::move(disjuncts));
}

namespace {

void collect_instances(const ChoiceExpr& e, std::set<InstanceKey>& out) {
    if (e.kind() == ChoiceExpr::Kind::Choice) {
        out.insert(e.choice().instance);
        return;
    }
    for (const auto& c : e.children())
        collect_instances(c, out);
}

template <class F>
void for_each_choice(const ChoiceExpr& e, F&& f) {
    if (e.kind() == ChoiceExpr::Kind::Choice) {
        f(e.choice());
        return;
    }
    for (const auto& c : e.children())
        for_each_choice(c, f);
}

} // namespace

std::vector<InstanceKey> mentioned_instances(const ChoiceExpr& e) {
    std::set<InstanceKey> out;
    collect_instances(e, out);
    return {out.begin(), out.end()};
}

std::vector<InstanceKey> mentioned_instances(const ChoiceFamily& k) {
    std::set<InstanceKey> out;
    for (const auto& kappa : k)
        for (const auto& a : kappa)
            out.insert(a.instance);
    return {out.begin(), out.end()};
}

void validate(const ChoiceExpr& e, const EventSpace& es) {
    for_each_choice(e, [&es](const AtomicChoice& a) { es.check(a); });
}

void validate(const ChoiceFamily& k, const EventSpace& es) {
    for (const auto& kappa : k)
        for (const auto& a : kappa)
            es.check(a);
}

// ---------------------------------------------------------------------------
// Composite-choice sets

bool consistent(const CompositeChoice& k) {
    // Members are sorted by instance, so clashes are adjacent.
    const AtomicChoice* prev = nullptr;
    for (const auto& a : k) {
        if (prev && prev->instance == a.instance && prev->head != a.head)
            return false;
        prev = &a;
    }
    return true;
}

std::set<AtomicChoice> complement(const AtomicChoice& a, const EventSpace& es) {
    es.check(a);
    std::set<AtomicChoice> out;
    const int n = static_cast<int>(es.head_count(a.instance));
    for (int j = 1; j <= n; ++j)
        if (j != a.head)
            out.insert({a.instance, j});
    return out;
}

std::set<AtomicChoice> complement(const CompositeChoice& k, const EventSpace& es) {
    std::set<AtomicChoice> out;
    for (const auto& a : k) {
        auto c = complement(a, es);
        out.insert(c.begin(), c.end());
    }
    return out;
}

ChoiceFamily mins(const std::vector<CompositeChoice>& k) {
    std::vector<const CompositeChoice*> cand;
    cand.reserve(k.size());
    for (const auto& kappa : k)
        if (consistent(kappa))
            cand.push_back(&kappa);
    std::stable_sort(cand.begin(), cand.end(),
                     [](const auto* a, const auto* b) { return a->size() < b->size(); });
    std::vector<const CompositeChoice*> kept;
    ChoiceFamily out;
    for (const auto* c : cand) {
        if (out.contains(*c))
            continue;
        bool redundant = std::any_of(kept.begin(), kept.end(), [c](const auto* s) {
            return s->size() < c->size() && std::includes(c->begin(), c->end(), s->begin(), s->end());
        });
        if (!redundant) {
            kept.push_back(c);
            out.insert(*c);
        }
    }
    return out;
}

ChoiceFamily mins(const ChoiceFamily& k) { return mins(std::vector<CompositeChoice>(k.begin(), k.end())); }

std::vector<CompositeChoice> hits(const std::vector<std::set<AtomicChoice>>& sets) {
    std::vector<CompositeChoice> acc{CompositeChoice{}};
    for (const auto& s : sets) {
        std::vector<CompositeChoice> next;
        next.reserve(acc.size() * s.size());
        for (const auto& partial : acc)
            for (const auto& a : s) {
                CompositeChoice grown = partial;
                grown.insert(a);
                next.push_back(std::move(grown));
            }
        acc = std::move(next);
    }
    return acc;
}

ChoiceFamily otimes(const ChoiceFamily& a, const ChoiceFamily& b) {
    std::vector<CompositeChoice> unions;
    unions.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) {
            CompositeChoice u = x;
            u.insert(y.begin(), y.end());
            unions.push_back(std::move(u));
        }
    return mins(unions);
}

// Taking mins after each factor gives the same result as one mins over the
// full product: a set dropped early only ever grows into supersets of a
// kept set, or stays inconsistent.
ChoiceFamily duals(const ChoiceFamily& k, const EventSpace& es) {
    ChoiceFamily acc{CompositeChoice{}};
    for (const auto& kappa : k) {
        const auto comp = complement(kappa, es);
        std::vector<CompositeChoice> next;
        next.reserve(acc.size() * comp.size());
        for (const auto& d : acc)
            for (const auto& b : comp) {
                CompositeChoice grown = d;
                grown.insert(b);
                next.push_back(std::move(grown));
            }
        acc = mins(next);
        if (acc.empty())
            break;
    }
    return acc;
}

ChoiceFamily gamma(const ChoiceExpr& e, const EventSpace& es) {
    using K = ChoiceExpr::Kind;
    switch (e.kind()) {
    case K::False: return {};
    case K::True: return {CompositeChoice{}};
    case K::Choice: es.check(e.choice()); return {CompositeChoice{e.choice()}};
    case K::Not: return duals(gamma(e.operand(), es), es);
    case K::And: {
        ChoiceFamily acc{CompositeChoice{}};
        for (const auto& c : e.children()) {
            acc = otimes(acc, gamma(c, es));
            if (acc.empty())
                break;
        }
        return acc;
    }
    case K::Or: {
        std::vector<CompositeChoice> all;
        for (const auto& c : e.children()) {
            auto g = gamma(c, es);
            all.insert(all.end(), g.begin(), g.end());
        }
        return mins(all);
    }
    }
    return {};
}

bool covers(const ChoiceFamily& k, const CompositeChoice& s) {
    return std::any_of(k.begin(), k.end(), [&s](const CompositeChoice& kappa) {
        return std::includes(s.begin(), s.end(), kappa.begin(), kappa.end());
    });
}

// ---------------------------------------------------------------------------
// simplify

namespace {

using K = ChoiceExpr::Kind;

bool single_head(const AtomicChoice& a, const EventSpace& es) { return es.head_count(a.instance) == 1; }

void sort_unique(std::vector<ChoiceExpr>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<ChoiceExpr> conjuncts(const ChoiceExpr& e) {
    if (e.kind() == K::And)
        return e.children();
    return {e};
}

// Literal-level reductions shared by simplify and dnf. Returns false when
// the conjunction collapses to ⊥; otherwise `cs` is rewritten in place.
bool reduce_conjunction(std::vector<ChoiceExpr>& cs, const EventSpace& es) {
    std::vector<ChoiceExpr> out;
    out.reserve(cs.size());
    for (auto& c : cs) {
        if (c.is_false())
            return false;
        if (!c.is_true())
            out.push_back(std::move(c));
    }
    sort_unique(out);

    std::map<InstanceKey, int> pos;
    for (const auto& c : out)
        if (c.kind() == K::Choice) {
            auto [it, fresh] = pos.emplace(c.choice().instance, c.choice().head);
            if (!fresh && it->second != c.choice().head)
                return false; // α1 ∧ α2, siblings
        }

    std::map<InstanceKey, std::set<int>> neg;
    std::vector<ChoiceExpr> kept;
    kept.reserve(out.size());
    for (auto& c : out) {
        if (c.kind() == K::Not && c.operand().kind() == K::Choice) {
            const auto& a = c.operand().choice();
            if (single_head(a, es))
                return false;
            if (auto it = pos.find(a.instance); it != pos.end()) {
                if (it->second == a.head)
                    return false; // α ∧ ¬α
                continue;         // α1 ∧ ¬α2 → α1
            }
            neg[a.instance].insert(a.head);
        }
        kept.push_back(std::move(c));
    }
    for (const auto& [inst, heads] : neg)
        if (heads.size() == es.head_count(inst))
            return false; // every head of one instance excluded

    for (const auto& c : kept)
        if (c.kind() == K::Not && std::binary_search(kept.begin(), kept.end(), c.operand()))
            return false; // C ∧ ¬C
    cs = std::move(kept);
    return true;
}

ChoiceExpr simplify_and(std::vector<ChoiceExpr> cs, const EventSpace& es) {
    if (!reduce_conjunction(cs, es))
        return ChoiceExpr::bottom();
    return ChoiceExpr::conj(std::move(cs));
}

ChoiceExpr simplify_or(std::vector<ChoiceExpr> cs) {
    std::vector<ChoiceExpr> out;
    out.reserve(cs.size());
    for (auto& c : cs) {
        if (c.is_true())
            return ChoiceExpr::top();
        if (!c.is_false())
            out.push_back(std::move(c));
    }
    sort_unique(out);
    for (const auto& c : out)
        if (c.kind() == K::Not && std::binary_search(out.begin(), out.end(), c.operand()))
            return ChoiceExpr::top(); // C ∨ ¬C

    // C1 ∨ (C1 ∧ C2) → C1
    std::vector<std::vector<ChoiceExpr>> parts;
    parts.reserve(out.size());
    for (const auto& c : out)
        parts.push_back(conjuncts(c));
    std::vector<ChoiceExpr> kept;
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool absorbed = false;
        for (std::size_t j = 0; j < out.size() && !absorbed; ++j)
            absorbed = j != i && parts[j].size() < parts[i].size() &&
                       std::includes(parts[i].begin(), parts[i].end(), parts[j].begin(), parts[j].end());
        if (!absorbed)
            kept.push_back(out[i]);
    }
    return ChoiceExpr::disj(std::move(kept));
}

ChoiceExpr simplify_pass(const ChoiceExpr& e, const EventSpace& es) {
    switch (e.kind()) {
    case K::False:
    case K::True:
    case K::Choice: return e;
    case K::Not: {
        ChoiceExpr c = simplify_pass(e.operand(), es);
        if (c.is_true())
            return ChoiceExpr::bottom();
        if (c.is_false())
            return ChoiceExpr::top();
        if (c.kind() == K::Choice && single_head(c.choice(), es))
            return ChoiceExpr::bottom();
        return ChoiceExpr::negation(std::move(c));
    }
    case K::And:
    case K::Or: {
        std::vector<ChoiceExpr> cs;
        cs.reserve(e.children().size());
        for (const auto& c : e.children())
            cs.push_back(simplify_pass(c, es));
        return e.kind() == K::And ? simplify_and(std::move(cs), es) : simplify_or(std::move(cs));
    }
    }
    return e;
}

} // namespace

ChoiceExpr simplify(const ChoiceExpr& e, const EventSpace& es) {
    validate(e, es);
    const std::size_t bound = 10 * e.size();
    ChoiceExpr cur = e;
    for (std::size_t i = 0; i < bound; ++i) {
        ChoiceExpr next = simplify_pass(cur, es);
        if (next == cur)
            return next;
        cur = std::move(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// dnf

namespace {

using Conj = std::vector<ChoiceExpr>; // sorted literals
using Dnf = std::vector<Conj>;

Dnf reduce_dnf(Dnf d, const EventSpace& es) {
    Dnf ok;
    ok.reserve(d.size());
    for (auto& c : d)
        if (reduce_conjunction(c, es))
            ok.push_back(std::move(c));
    std::sort(ok.begin(), ok.end());
    ok.erase(std::unique(ok.begin(), ok.end()), ok.end());
    std::stable_sort(ok.begin(), ok.end(), [](const Conj& a, const Conj& b) { return a.size() < b.size(); });
    Dnf kept;
    for (auto& c : ok) {
        bool absorbed = std::any_of(kept.begin(), kept.end(), [&c](const Conj& s) {
            return std::includes(c.begin(), c.end(), s.begin(), s.end());
        });
        if (!absorbed)
            kept.push_back(std::move(c));
    }
    return kept;
}

Dnf product(const Dnf& a, const Dnf& b, const EventSpace& es) {
    Dnf out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) {
            Conj u = x;
            u.insert(u.end(), y.begin(), y.end());
            out.push_back(std::move(u));
        }
    return reduce_dnf(std::move(out), es);
}

// Negation pushed to the leaves while building the clause list.
Dnf to_dnf(const ChoiceExpr& e, bool negated, const EventSpace& es) {
    switch (e.kind()) {
    case K::False: return negated ? Dnf{Conj{}} : Dnf{};
    case K::True: return negated ? Dnf{} : Dnf{Conj{}};
    case K::Choice: return reduce_dnf({Conj{negated ? ChoiceExpr::negation(e) : e}}, es);
    case K::Not: return to_dnf(e.operand(), !negated, es);
    case K::And:
    case K::Or: {
        const bool conjunctive = (e.kind() == K::And) != negated;
        if (conjunctive) {
            Dnf acc{Conj{}};
            for (const auto& c : e.children()) {
                acc = product(acc, to_dnf(c, negated, es), es);
                if (acc.empty())
                    break;
            }
            return acc;
        }
        Dnf all;
        for (const auto& c : e.children()) {
            Dnf d = to_dnf(c, negated, es);
            all.insert(all.end(), std::make_move_iterator(d.begin()), std::make_move_iterator(d.end()));
        }
        return reduce_dnf(std::move(all), es);
    }
    }
    return {};
}

} // namespace

ChoiceExpr dnf(const ChoiceExpr& e, const EventSpace& es) {
    validate(e, es);
    Dnf d = to_dnf(e, false, es);
    std::vector<ChoiceExpr> disjuncts;
    disjuncts.reserve(d.size());
    for (auto& c : d)
        disjuncts.push_back(ChoiceExpr::conj(std::move(c)));
    return simplify(ChoiceExpr::disj(std::move(disjuncts)), es);
}

// ---------------------------------------------------------------------------
// Evaluation

bool evaluate(const ChoiceExpr& e, const HeadAssignment& heads) {
    switch (e.kind()) {
    case K::False: return false;
    case K::True: return true;
    case K::Choice: {
        auto it = heads.find(e.choice().instance);
        if (it == heads.end())
            throw ProgramError("no head assigned for " + to_string(e.choice()));
        return it->second == e.choice().head;
    }
    case K::Not: return !evaluate(e.operand(), heads);
    case K::And:
        return std::all_of(e.children().begin(), e.children().end(),
                           [&heads](const ChoiceExpr& c) { return evaluate(c, heads); });
    case K::Or:
        return std::any_of(e.children().begin(), e.children().end(),
                           [&heads](const ChoiceExpr& c) { return evaluate(c, heads); });
    }
    return false;
}

FlatExpr::FlatExpr(const ChoiceExpr& e, const std::vector<InstanceKey>& order) {
    std::map<InstanceKey, int> pos;
    for (std::size_t i = 0; i < order.size(); ++i)
        pos.emplace(order[i], static_cast<int>(i));
    // Post-order: children land before their parent, root is last.
    auto build = [&](auto&& self, const ChoiceExpr& x) -> std::uint32_t {
        Op op{x.kind()};
        if (x.kind() == K::Choice) {
            auto it = pos.find(x.choice().instance);
            if (it == pos.end())
                throw ProgramError("instance of " + to_string(x.choice()) + " missing from evaluation order");
            op.instance = it->second;
            op.head = x.choice().head;
        } else if (!x.children().empty()) {
            std::vector<std::uint32_t> ids;
            for (const auto& c : x.children())
                ids.push_back(self(self, c));
            op.first = static_cast<std::uint32_t>(child_ids_.size());
            op.count = static_cast<std::uint32_t>(ids.size());
            child_ids_.insert(child_ids_.end(), ids.begin(), ids.end());
        }
        ops_.push_back(op);
        return static_cast<std::uint32_t>(ops_.size() - 1);
    };
    build(build, e);
}

bool FlatExpr::eval(const int* heads) const {
    auto go = [&](auto&& self, std::uint32_t i) -> bool {
        const Op& op = ops_[i];
        switch (op.kind) {
        case K::False: return false;
        case K::True: return true;
        case K::Choice: return heads[op.instance] == op.head;
        case K::Not: return !self(self, child_ids_[op.first]);
        case K::And:
            for (std::uint32_t k = 0; k < op.count; ++k)
                if (!self(self, child_ids_[op.first + k]))
                    return false;
            return true;
        case K::Or:
            for (std::uint32_t k = 0; k < op.count; ++k)
                if (self(self, child_ids_[op.first + k]))
                    return true;
            return false;
        }
        return false;
    };
    return go(go, static_cast<std::uint32_t>(ops_.size() - 1));
}

bool equiv(const ChoiceExpr& a, const ChoiceExpr& b, const EventSpace& es, std::size_t max_instances) {
    std::set<InstanceKey> all;
    collect_instances(a, all);
    collect_instances(b, all);
    if (all.size() > max_instances)
        throw LimitError("equiv: " + std::to_string(all.size()) + " mentioned instances exceed the limit of " +
                         std::to_string(max_instances));
    std::vector<InstanceKey> order(all.begin(), all.end());
    std::vector<int> radix;
    std::uint64_t total = 1;
    for (const auto& k : order) {
        radix.push_back(static_cast<int>(es.head_count(k)));
        total *= static_cast<std::uint64_t>(radix.back());
        if (total > kEquivAssignmentLimit)
            throw LimitError("equiv: too many head assignments");
    }
    validate(a, es);
    validate(b, es);
    FlatExpr fa(a, order), fb(b, order);
    std::vector<int> heads(order.size(), 1);
    for (;;) {
        if (fa.eval(heads.data()) != fb.eval(heads.data()))
            return false;
        std::size_t i = 0;
        while (i < heads.size() && heads[i] == radix[i])
            heads[i++] = 1;
        if (i == heads.size())
            return true;
        ++heads[i];
    }
}

// ---------------------------------------------------------------------------
// Text

std::string to_string(const AtomicChoice& a) {
    return "(c" + std::to_string(a.instance.clause) + "," + theta_text(a.instance.theta) + "," +
           std::to_string(a.head) + ")";
}

std::string to_string(const CompositeChoice& k) {
    std::string out = "{";
    bool first = true;
    for (const auto& a : k) {
        if (!first)
            out += ",";
        first = false;
        out += to_string(a);
    }
    return out + "}";
}

std::string to_string(const ChoiceFamily& k) {
    std::string out = "{";
    bool first = true;
    for (const auto& kappa : k) {
        if (!first)
            out += ",";
        first = false;
        out += to_string(kappa);
    }
    return out + "}";
}

namespace {

// ctx: 0 = top or disjunct, 1 = conjunct, 2 = operand of ~
std::string render(const ChoiceExpr& e, int ctx) {
    switch (e.kind()) {
    case K::False: return "false";
    case K::True: return "true";
    case K::Choice: return to_string(e.choice());
    case K::Not: return "~" + render(e.operand(), 2);
    case K::And:
    case K::Or: {
        const bool conj = e.kind() == K::And;
        std::string s;
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            if (i)
                s += conj ? " & " : " | ";
            s += render(e.children()[i], conj ? 1 : 0);
        }
        const bool paren = conj ? ctx >= 2 : ctx >= 1;
        return paren ? "(" + s + ")" : s;
    }
    }
    return {};
}

using detail::Lexer;
using detail::Tok;

int parse_int(const detail::Token& t, std::string_view what) {
    int v = 0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size() || v < 1)
        throw ParseError("malformed " + std::string(what) + " '" + t.text + "'", t.line, t.column);
    return v;
}

class ChoiceReader {
public:
    explicit ChoiceReader(std::string_view text) : lex_(text) {}

    ChoiceExpr whole_expr() {
        ChoiceExpr e = disjunction();
        lex_.expect(Tok::End, "end of expression");
        return e;
    }

    ChoiceFamily whole_family() {
        ChoiceFamily out;
        lex_.expect(Tok::LBrace, "'{'");
        if (!lex_.accept(Tok::RBrace)) {
            do
                out.insert(composite());
            while (lex_.accept(Tok::Comma));
            lex_.expect(Tok::RBrace, "'}'");
        }
        lex_.expect(Tok::End, "end of input");
        return out;
    }

private:
    CompositeChoice composite() {
        CompositeChoice k;
        lex_.expect(Tok::LBrace, "'{'");
        if (lex_.accept(Tok::RBrace))
            return k;
        do {
            lex_.expect(Tok::LParen, "'('");
            k.insert(atomic_rest());
        } while (lex_.accept(Tok::Comma));
        lex_.expect(Tok::RBrace, "'}'");
        return k;
    }

    // After the opening parenthesis.
    AtomicChoice atomic_rest() {
        auto name = lex_.expect(Tok::Name, "a clause name such as c2");
        if (name.text.size() < 2 || name.text[0] != 'c')
            throw ParseError("clause names look like c<k>, got '" + name.text + "'", name.line, name.column);
        detail::Token idtok = name;
        idtok.text = name.text.substr(1);
        AtomicChoice a;
        a.instance.clause = parse_int(idtok, "clause name");
        lex_.expect(Tok::Comma, "','");
        auto list = lex_.expect(Tok::List, "a constant list");
        a.instance.theta = parse_theta_text(list.text);
        lex_.expect(Tok::Comma, "','");
        a.head = parse_int(lex_.expect(Tok::Number, "a head index"), "head index");
        lex_.expect(Tok::RParen, "')'");
        return a;
    }

    ChoiceExpr disjunction() {
        std::vector<ChoiceExpr> parts{conjunction()};
        while (lex_.accept(Tok::Bar))
            parts.push_back(conjunction());
        return parts.size() == 1 ? parts.front() : ChoiceExpr::disj(std::move(parts));
    }

    ChoiceExpr conjunction() {
        std::vector<ChoiceExpr> parts{unary()};
        while (lex_.accept(Tok::Amp))
            parts.push_back(unary());
        return parts.size() == 1 ? parts.front() : ChoiceExpr::conj(std::move(parts));
    }

    ChoiceExpr unary() {
        if (lex_.accept(Tok::Tilde))
            return ChoiceExpr::negation(unary());
        const auto& t = lex_.peek();
        if (t.kind == Tok::Name && (t.text == "true" || t.text == "false")) {
            bool v = lex_.next().text == "true";
            return v ? ChoiceExpr::top() : ChoiceExpr::bottom();
        }
        lex_.expect(Tok::LParen, "'(', '~', true or false");
        // `(c2,` starts an atomic choice; anything else is a group.
        if (lex_.peek().kind == Tok::Name && lex_.peek().text != "true" && lex_.peek().text != "false")
            return ChoiceExpr::choice(atomic_rest());
        ChoiceExpr inner = disjunction();
        lex_.expect(Tok::RParen, "')'");
        return inner;
    }

    Lexer lex_;
};

} // namespace

std::string to_string(const ChoiceExpr& e) { return render(e, 0); }

ChoiceExpr parse_choice_expr(std::string_view text) { return ChoiceReader(text).whole_expr(); }

ChoiceFamily parse_choice_family(std::string_view text) { return ChoiceReader(text).whole_family(); }

} // namespace lpad
