#include "lpad/slpdnf.hpp"

#include "lpad/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace lpad {

const char* to_string(Marking m) {
    switch (m) {
    case Marking::Unmarked: return "unmarked";
    case Marking::Success: return "success";
    case Marking::Failed: return "failed";
    case Marking::Floundered: return "floundered";
    }
    return "?";
}

std::vector<NodeId> SlpdnfTree::success_leaves(TreeId t) const {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{trees.at(t).root};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        const auto& node = nodes[n];
        if (node.marking == Marking::Success)
            out.push_back(n);
        for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
            stack.push_back(it->node);
    }
    return out;
}

std::vector<ChoiceExpr> SlpdnfTree::success_exprs(TreeId t) const {
    std::vector<ChoiceExpr> out;
    for (NodeId n : success_leaves(t))
        out.push_back(nodes[n].expr);
    return out;
}

std::vector<NodeId> SlpdnfTree::path_to(NodeId leaf) const {
    std::vector<NodeId> path{leaf};
    while (nodes.at(path.back()).parent)
        path.push_back(*nodes[path.back()].parent);
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

class Engine {
public:
    Engine(const GroundProgram& g, const EngineOptions& opts) : g_(g), es_(g.events()), opts_(opts) {
        for (std::size_t i = 0; i < g.derived.size(); ++i)
            derived_[g.derived[i].head.signature()].push_back(i);
        for (std::size_t i = 0; i < g.prob.size(); ++i) {
            const auto& heads = g.prob[i].instance.heads;
            for (std::size_t h = 0; h < heads.size(); ++h)
                if (heads[h].atom.predicate != kNonePredicate)
                    prob_[heads[h].atom.signature()].push_back({i, static_cast<int>(h + 1)});
        }
    }

    SlpdnfTree run(const Query& q) {
        tree_.query = q;
        build(q, std::nullopt);
        return std::move(tree_);
    }

private:
    struct ProbHeadRef {
        std::size_t instance;
        int head;
    };

    TreeId build(const Query& q, std::optional<Atom> atom) {
        const TreeId id = tree_.trees.size();
        const NodeId root = new_node(q, ChoiceExpr::top(), std::nullopt, 0);
        tree_.trees.push_back({root, std::move(atom)});
        std::vector<NodeId> stack{root};
        while (!stack.empty()) {
            NodeId n = stack.back();
            stack.pop_back();
            expand(n);
            const auto& kids = tree_.nodes[n].children;
            for (auto it = kids.rbegin(); it != kids.rend(); ++it)
                stack.push_back(it->node);
        }
        return id;
    }

    NodeId new_node(Query q, ChoiceExpr e, std::optional<NodeId> parent, std::size_t depth) {
        if (tree_.nodes.size() >= opts_.max_nodes)
            throw LimitError("tree exceeds " + std::to_string(opts_.max_nodes) + " nodes");
        if (depth > opts_.max_depth)
            throw LimitError("derivation deeper than " + std::to_string(opts_.max_depth) + " steps at query " +
                             to_string(q));
        SlpdnfNode node;
        node.query = std::move(q);
        node.expr = std::move(e);
        node.parent = parent;
        node.depth = depth;
        tree_.nodes.push_back(std::move(node));
        return tree_.nodes.size() - 1;
    }

    void add_child(NodeId parent, EdgeLabel edge, Query q, ChoiceExpr e) {
        const std::size_t depth = tree_.nodes[parent].depth + 1;
        NodeId child = new_node(std::move(q), std::move(e), parent, depth);
        tree_.nodes[parent].children.push_back({std::move(edge), child});
    }

    static Query resolvent(const Query& body, const Query& rest, const Substitution& sigma) {
        Query out = apply(sigma, body);
        Query tail = apply(sigma, rest);
        out.insert(out.end(), tail.begin(), tail.end());
        return out;
    }

    void expand(NodeId n) {
        if (tree_.nodes[n].query.empty()) {
            tree_.nodes[n].marking = Marking::Success;
            return;
        }
        // Copies: the node vector grows while children are added.
        const Query query = tree_.nodes[n].query;
        const ChoiceExpr expr = tree_.nodes[n].expr;
        const Literal& lit = query.front();
        const Query rest(query.begin() + 1, query.end());

        if (!lit.positive) {
            if (!lit.atom.is_ground()) {
                tree_.nodes[n].marking = Marking::Floundered;
                return;
            }
            auto [tid, ca] = negation(lit.atom);
            tree_.nodes[n].subsidiary = tid;
            ChoiceExpr next = dnf(ChoiceExpr::conj(expr, ca), es_);
            if (next.is_false()) {
                tree_.nodes[n].marking = Marking::Failed;
                return;
            }
            EdgeLabel edge;
            edge.kind = EdgeLabel::Kind::Negation;
            edge.expr = ca;
            add_child(n, std::move(edge), rest, std::move(next));
            return;
        }

        const Predicate pred = lit.atom.signature();
        if (g_.prob_predicates.contains(pred)) {
            if (auto it = prob_.find(pred); it != prob_.end())
                for (const auto& [inst, head] : it->second) {
                    const auto& gc = g_.prob[inst];
                    auto sigma = mgu(lit.atom, gc.instance.heads[static_cast<std::size_t>(head - 1)].atom);
                    if (!sigma)
                        continue;
                    AtomicChoice alpha{gc.key(), head};
                    ChoiceExpr next = dnf(ChoiceExpr::conj(expr, ChoiceExpr::choice(alpha)), es_);
                    if (next.is_false())
                        continue;
                    EdgeLabel edge;
                    edge.kind = EdgeLabel::Kind::Choice;
                    edge.sigma = *sigma;
                    edge.choice = alpha;
                    edge.clause = inst;
                    add_child(n, std::move(edge), resolvent(gc.instance.body, rest, *sigma), std::move(next));
                }
        } else if (auto it = derived_.find(pred); it != derived_.end()) {
            for (std::size_t idx : it->second) {
                const auto& c = g_.derived[idx];
                auto sigma = mgu(lit.atom, c.head);
                if (!sigma)
                    continue;
                EdgeLabel edge;
                edge.kind = EdgeLabel::Kind::Derived;
                edge.sigma = *sigma;
                edge.clause = idx;
                add_child(n, std::move(edge), resolvent(c.body, rest, *sigma), expr);
            }
        }
        if (tree_.nodes[n].children.empty())
            tree_.nodes[n].marking = Marking::Failed;
    }

    // Subsidiary tree for ⟨a, ⊤⟩ and C_a = dnf(¬(C1 ∨ ... ∨ Cn)). With no
    // successes the disjunction is ⊥ and C_a is ⊤.
    std::pair<TreeId, ChoiceExpr> negation(const Atom& a) {
        if (auto it = neg_cache_.find(a); it != neg_cache_.end())
            return {tree_.subs.at(a), it->second};
        if (!in_progress_.insert(a).second)
            throw ProgramError("not stratified: \\+" + to_string(a) + " is needed to decide itself");
        const TreeId tid = build(Query{Literal::pos(a)}, a);
        tree_.subs[a] = tid;
        ChoiceExpr ca = dnf(ChoiceExpr::negation(ChoiceExpr::disj(tree_.success_exprs(tid))), es_);
        in_progress_.erase(a);
        neg_cache_.emplace(a, ca);
        return {tid, ca};
    }

    const GroundProgram& g_;
    EventSpace es_;
    EngineOptions opts_;
    std::map<Predicate, std::vector<std::size_t>> derived_;
    std::map<Predicate, std::vector<ProbHeadRef>> prob_;
    std::set<Atom> in_progress_;
    std::map<Atom, ChoiceExpr> neg_cache_;
    SlpdnfTree tree_;
};

} // namespace

SlpdnfTree build_tree(const Query& q, const GroundProgram& g, const EngineOptions& opts) {
    return Engine(g, opts).run(q);
}

namespace {

Substitution compose_path(const SlpdnfTree& t, const std::vector<NodeId>& path) {
    Substitution s;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& node = t.nodes[path[i]];
        for (const auto& c : node.children)
            if (c.node == path[i + 1]) {
                s = s.then(c.edge.sigma);
                break;
            }
    }
    return s;
}

const EdgeLabel* edge_between(const SlpdnfTree& t, NodeId from, NodeId to) {
    for (const auto& c : t.nodes[from].children)
        if (c.node == to)
            return &c.edge;
    return nullptr;
}

} // namespace

std::vector<Answer> answers(const SlpdnfTree& t) {
    std::vector<Answer> out;
    const auto vars = variables(t.query);
    for (NodeId leaf : t.success_leaves(0))
        out.push_back({compose_path(t, t.path_to(leaf)).restrict_to(vars), t.nodes[leaf].expr, leaf});
    return out;
}

std::vector<Derivation> derivations(const SlpdnfTree& t) {
    std::vector<Derivation> out;
    const auto vars = variables(t.query);
    for (NodeId leaf : t.success_leaves(0)) {
        const auto path = t.path_to(leaf);
        Derivation d;
        d.query = t.query;
        d.cas = compose_path(t, path).restrict_to(vars);
        d.expr = t.nodes[leaf].expr;
        d.leaf = leaf;
        for (std::size_t i = 0; i < path.size(); ++i) {
            const auto& node = t.nodes[path[i]];
            DerivationStep step{node.query, node.expr, std::nullopt, node.subsidiary};
            if (i + 1 < path.size())
                step.edge = *edge_between(t, path[i], path[i + 1]);
            d.steps.push_back(std::move(step));
        }
        out.push_back(std::move(d));
    }
    return out;
}

ChoiceFamily expl(const SlpdnfTree& t, const EventSpace& es) {
    ChoiceFamily out;
    for (const auto& e : t.success_exprs(0)) {
        auto g = gamma(e, es);
        out.insert(g.begin(), g.end());
    }
    return out;
}

ChoiceFamily expl(const Query& q, const GroundProgram& g, const EngineOptions& opts) {
    if (!is_ground(q))
        throw ProgramError("expl needs a ground query, got " + to_string(q));
    return expl(build_tree(q, g, opts), g.events());
}

ChoiceExpr success_expr(const SlpdnfTree& t) { return ChoiceExpr::disj(t.success_exprs(0)); }

// ---------------------------------------------------------------------------
// Dumps

namespace {

using nlohmann::ordered_json;

ordered_json edge_json(const EdgeLabel& e) {
    ordered_json j;
    j["kind"] = e.kind == EdgeLabel::Kind::Derived ? "derived" : e.kind == EdgeLabel::Kind::Choice ? "choice" : "negation";
    j["sigma"] = e.sigma.to_string();
    if (e.choice)
        j["choice"] = to_string(*e.choice);
    if (e.expr)
        j["expr"] = to_string(*e.expr);
    return j;
}

ordered_json node_json(const SlpdnfTree& t, NodeId id) {
    const auto& n = t.nodes[id];
    ordered_json j;
    j["id"] = id;
    j["query"] = to_string(n.query);
    j["expr"] = to_string(n.expr);
    j["marking"] = to_string(n.marking);
    if (n.subsidiary)
        j["subsidiary"] = *n.subsidiary;
    ordered_json kids = ordered_json::array();
    for (const auto& c : n.children) {
        ordered_json k;
        k["edge"] = edge_json(c.edge);
        k["node"] = node_json(t, c.node);
        kids.push_back(std::move(k));
    }
    j["children"] = std::move(kids);
    return j;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string tree_to_json(const SlpdnfTree& t) {
    ordered_json j;
    j["query"] = to_string(t.query);
    ordered_json trees = ordered_json::array();
    for (std::size_t i = 0; i < t.trees.size(); ++i) {
        ordered_json tj;
        tj["id"] = i;
        tj["atom"] = t.trees[i].atom ? ordered_json(to_string(*t.trees[i].atom)) : ordered_json(nullptr);
        tj["root"] = node_json(t, t.trees[i].root);
        trees.push_back(std::move(tj));
    }
    j["trees"] = std::move(trees);
    return j.dump(2) + "\n";
}

std::string tree_to_dot(const SlpdnfTree& t) {
    std::ostringstream out;
    out << "digraph slpdnf {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto& n = t.nodes[i];
        out << "  n" << i << " [label=\"" << dot_escape(n.query.empty() ? "[]" : to_string(n.query)) << "\\n"
            << dot_escape(to_string(n.expr));
        if (n.marking == Marking::Failed || n.marking == Marking::Floundered)
            out << "\\n[" << to_string(n.marking) << "]";
        out << "\"];\n";
    }
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto& n = t.nodes[i];
        for (const auto& c : n.children) {
            std::string label;
            if (c.edge.choice)
                label = to_string(*c.edge.choice);
            else if (c.edge.expr)
                label = to_string(*c.edge.expr);
            out << "  n" << i << " -> n" << c.node;
            if (!label.empty())
                out << " [label=\"" << dot_escape(label) << "\"]";
            out << ";\n";
        }
        if (n.subsidiary)
            out << "  n" << i << " -> n" << t.trees[*n.subsidiary].root << " [style=dotted];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace lpad
