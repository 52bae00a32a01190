#include "lpad/explainer.hpp"

#include "lpad/error.hpp"
#include "lpad/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <sstream>

namespace lpad {

// ---------------------------------------------------------------------------
// chq

namespace {

using RK = ReadableExpr::Kind;

ReadableExpr lift(const ChoiceExpr& e, const EventSpace& es) {
    using K = ChoiceExpr::Kind;
    ReadableExpr r;
    switch (e.kind()) {
    case K::False: r.kind = RK::False; break;
    case K::True: r.kind = RK::True; break;
    case K::Choice: {
        const auto& a = e.choice();
        const auto& info = es.at(a.instance);
        r.kind = RK::Literal;
        r.origin = a;
        r.atom = info.heads.empty() ? Atom{to_string(a), {}} : info.heads.at(static_cast<std::size_t>(a.head - 1));
        break;
    }
    case K::Not: {
        ReadableExpr inner = lift(e.operand(), es);
        if (inner.kind == RK::Literal) {
            inner.positive = !inner.positive;
            return inner;
        }
        r.kind = RK::Not;
        r.children.push_back(std::move(inner));
        break;
    }
    case K::And:
    case K::Or:
        r.kind = e.kind() == K::And ? RK::And : RK::Or;
        for (const auto& c : e.children())
            r.children.push_back(lift(c, es));
        break;
    }
    return r;
}

ReadableExpr constant(bool v) {
    ReadableExpr r;
    r.kind = v ? RK::True : RK::False;
    return r;
}

ReadableExpr prune(ReadableExpr r, const Atom& a) {
    switch (r.kind) {
    case RK::Literal: return (!r.positive && r.atom == a) ? constant(true) : r;
    case RK::Not: r.children.front() = prune(std::move(r.children.front()), a); return r;
    case RK::And:
    case RK::Or: {
        const bool conj = r.kind == RK::And;
        std::vector<ReadableExpr> kept;
        for (auto& c : r.children) {
            ReadableExpr p = prune(std::move(c), a);
            if (p.kind == (conj ? RK::False : RK::True))
                return p; // absorbing element
            if (p.kind != (conj ? RK::True : RK::False))
                kept.push_back(std::move(p));
        }
        if (kept.empty())
            return constant(conj);
        if (kept.size() == 1)
            return std::move(kept.front());
        r.children = std::move(kept);
        return r;
    }
    default: return r;
    }
}

std::string literal_text(bool positive, const Atom& a) { return (positive ? "" : "\\+") + to_string(a); }

std::string render_readable(const ReadableExpr& e, int ctx) {
    switch (e.kind) {
    case RK::True: return "true";
    case RK::False: return "false";
    case RK::Literal: return literal_text(e.positive, e.atom);
    case RK::Not: return "~" + render_readable(e.children.front(), 2);
    case RK::And:
    case RK::Or: {
        const bool conj = e.kind == RK::And;
        std::string s;
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i)
                s += conj ? " & " : " | ";
            s += render_readable(e.children[i], conj ? 1 : 0);
        }
        return (conj ? ctx >= 2 : ctx >= 1) ? "(" + s + ")" : s;
    }
    }
    return {};
}

} // namespace

ReadableExpr chq(const ChoiceExpr& e, const EventSpace& es, const std::optional<Atom>& negated_atom) {
    ReadableExpr r = lift(e, es);
    return negated_atom ? prune(std::move(r), *negated_atom) : r;
}

std::string to_string(const ReadableExpr& e) { return render_readable(e, 0); }

// ---------------------------------------------------------------------------
// AND-trees

Derivation backpropagate(const Derivation& d) {
    Substitution sigma;
    for (const auto& step : d.steps)
        if (step.edge)
            sigma = sigma.then(step.edge->sigma);
    Derivation out = d;
    for (auto& step : out.steps) {
        step.query = lpad::apply(sigma, step.query);
        if (!is_ground(step.query))
            throw Error("backpropagation left a non-ground query: " + to_string(step.query));
    }
    out.query = lpad::apply(sigma, d.query);
    return out;
}

std::vector<AndTree> and_tree(const Derivation& d, const EventSpace& es) {
    struct Cell {
        Literal label;
        std::vector<std::size_t> kids;
        std::optional<ReadableExpr> expr;
    };
    std::vector<Cell> cells;
    std::deque<std::size_t> pending;
    std::vector<std::size_t> roots;
    if (d.steps.empty())
        return {};
    for (const auto& l : d.steps.front().query) {
        cells.push_back({l, {}, std::nullopt});
        roots.push_back(cells.size() - 1);
        pending.push_back(cells.size() - 1);
    }
    for (std::size_t i = 0; i + 1 < d.steps.size(); ++i) {
        const auto& cur = d.steps[i];
        const auto& next = d.steps[i + 1];
        if (pending.empty())
            throw Error("derivation steps past an empty query");
        const std::size_t sel = pending.front();
        pending.pop_front();
        if (cur.edge && cur.edge->kind == EdgeLabel::Kind::Negation) {
            cells[sel].expr = chq(*cur.edge->expr, es, cur.query.front().atom);
            continue;
        }
        // The body of the resolving clause replaced the selected literal.
        const std::size_t k = next.query.size() + 1 - cur.query.size();
        std::vector<std::size_t> fresh;
        for (std::size_t j = 0; j < k; ++j) {
            cells.push_back({next.query[j], {}, std::nullopt});
            fresh.push_back(cells.size() - 1);
        }
        cells[sel].kids = fresh;
        for (auto it = fresh.rbegin(); it != fresh.rend(); ++it)
            pending.push_front(*it);
    }
    auto build = [&](auto&& self, std::size_t id) -> AndTree {
        AndTree t{cells[id].label, {}, cells[id].expr};
        for (auto k : cells[id].kids)
            t.children.push_back(self(self, k));
        return t;
    };
    std::vector<AndTree> out;
    for (auto r : roots)
        out.push_back(build(build, r));
    return out;
}

std::vector<Explanation> explain(const Query& q, const GroundProgram& g, const EngineOptions& opts,
                                 const ProbOptions& prob) {
    require_stratified(g);
    const auto tree = build_tree(q, g, opts);
    const auto es = g.events();
    std::vector<Explanation> out;
    std::size_t order = 0;
    for (const auto& d : derivations(tree)) {
        Explanation e;
        e.roots = and_tree(backpropagate(d), es);
        e.probability = derivation_prob(d, es, prob);
        e.expr = d.expr;
        e.leaf_order = order++;
        out.push_back(std::move(e));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Explanation& a, const Explanation& b) { return a.probability > b.probability; });
    return out;
}

// ---------------------------------------------------------------------------
// Text

namespace {

constexpr const char* kIndent = "   ";

std::string indent(std::size_t depth) {
    std::string s;
    for (std::size_t i = 0; i < depth; ++i)
        s += kIndent;
    return s;
}

std::string alternatives_of(const ReadableExpr& lit, const EventSpace& es) {
    if (!lit.origin)
        return {};
    const auto& info = es.at(lit.origin->instance);
    std::string s = " {";
    bool first = true;
    for (std::size_t h = 0; h < info.heads.size(); ++h) {
        if (static_cast<int>(h + 1) == lit.origin->head)
            continue;
        if (!first)
            s += ", ";
        first = false;
        s += to_string(info.heads[h]);
    }
    return s + "}";
}

bool has_reasons(const AndTree& t) {
    return !t.children.empty() || (t.expr && t.expr->kind != RK::True);
}

class TextRenderer {
public:
    TextRenderer(const EventSpace& es, const RenderOptions& opts) : es_(es), opts_(opts) {}

    std::string run(const std::vector<AndTree>& roots) {
        for (const auto& r : roots)
            node(r, 0);
        return out_.str();
    }

private:
    void line(std::size_t depth, const std::string& text) { out_ << indent(depth) << text << "\n"; }

    void node(const AndTree& t, std::size_t depth) {
        std::string text = to_string(t.label);
        if (opts_.fold_depth && depth >= *opts_.fold_depth && has_reasons(t)) {
            line(depth, text + " ...");
            return;
        }
        line(depth, text);
        for (const auto& c : t.children)
            node(c, depth + 1);
        if (t.expr)
            expr(*t.expr, depth + 1);
    }

    void expr(const ReadableExpr& e, std::size_t depth) {
        switch (e.kind) {
        case RK::True: return;
        case RK::False: line(depth, "false"); return;
        case RK::Literal: {
            std::string s = literal_text(e.positive, e.atom);
            if (opts_.alternatives && !e.positive)
                s += alternatives_of(e, es_);
            line(depth, s);
            return;
        }
        case RK::Not: line(depth, "~" + render_readable(e.children.front(), 2)); return;
        case RK::And:
            for (const auto& c : e.children)
                expr(c, depth);
            return;
        case RK::Or:
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i)
                    line(depth, ";");
                expr(e.children[i], depth);
            }
            return;
        }
    }

    const EventSpace& es_;
    const RenderOptions& opts_;
    std::ostringstream out_;
};

} // namespace

std::string render_text(const std::vector<AndTree>& roots, const EventSpace& es, const RenderOptions& opts) {
    return TextRenderer(es, opts).run(roots);
}

// ---------------------------------------------------------------------------
// Natural language

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string fill(const std::string& tmpl, const Substitution& s) {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (!word_char(tmpl[i])) {
            out += tmpl[i++];
            continue;
        }
        std::size_t j = i;
        while (j < tmpl.size() && word_char(tmpl[j]))
            ++j;
        const std::string word = tmpl.substr(i, j - i);
        const Term* t = s.lookup(word);
        out += t ? t->name : word;
        i = j;
    }
    return out;
}

std::string insert_not(const std::string& sentence) {
    static constexpr std::array<std::string_view, 12> aux = {"is",    "was", "are",    "were", "can", "could",
                                                              "will",  "would", "should", "does", "did", "do"};
    std::size_t i = 0;
    while (i < sentence.size()) {
        if (!word_char(sentence[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < sentence.size() && word_char(sentence[j]))
            ++j;
        const std::string_view word(sentence.data() + i, j - i);
        if (std::find(aux.begin(), aux.end(), word) != aux.end())
            return sentence.substr(0, j) + " not" + sentence.substr(j);
        i = j;
    }
    return "it is not the case that " + sentence;
}

std::optional<std::string> match(const Atom& a, const Annotation& ann) {
    auto s = mgu(ann.pattern, a);
    if (!s)
        return std::nullopt;
    return fill(ann.text, *s);
}

} // namespace

std::string literal_sentence(const Literal& l, const std::vector<Annotation>& annotations) {
    if (!l.positive)
        for (const auto& ann : annotations)
            if (ann.negated)
                if (auto s = match(l.atom, ann))
                    return *s;
    for (const auto& ann : annotations)
        if (!ann.negated)
            if (auto s = match(l.atom, ann))
                return l.positive ? *s : insert_not(*s);
    return to_string(l);
}

namespace {

class NlRenderer {
public:
    NlRenderer(const std::vector<Annotation>& ann, const EventSpace& es, const RenderOptions& opts)
        : ann_(ann), es_(es), opts_(opts) {}

    std::string run(const std::vector<AndTree>& roots) {
        for (std::size_t i = 0; i < roots.size(); ++i)
            node(roots[i], 0, i ? "and " : "");
        return out_.str();
    }

private:
    void line(std::size_t depth, const std::string& text) { out_ << indent(depth) << text << "\n"; }

    void node(const AndTree& t, std::size_t depth, const std::string& prefix) {
        std::string text = prefix + literal_sentence(t.label, ann_);
        if (!has_reasons(t)) {
            line(depth, text);
            return;
        }
        if (opts_.fold_depth && depth >= *opts_.fold_depth) {
            line(depth, text + " ...");
            return;
        }
        line(depth, text + " because");
        for (std::size_t i = 0; i < t.children.size(); ++i)
            node(t.children[i], depth + 1, i ? "and " : "");
        if (t.expr)
            expr(*t.expr, depth + 1, !t.children.empty());
    }

    // `continuing`: an earlier sibling was already printed at this depth.
    void expr(const ReadableExpr& e, std::size_t depth, bool continuing) {
        switch (e.kind) {
        case RK::True: return;
        case RK::Or:
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i)
                    line(depth, "or because");
                expr(e.children[i], depth, i == 0 && continuing);
            }
            return;
        case RK::And:
            for (std::size_t i = 0; i < e.children.size(); ++i)
                expr(e.children[i], depth, continuing || i > 0);
            return;
        case RK::Literal: {
            std::string s = (continuing ? "and " : "") + literal_sentence({e.positive, e.atom}, ann_);
            if (opts_.alternatives && !e.positive)
                s += alternatives_of(e, es_);
            line(depth, s);
            return;
        }
        case RK::False: line(depth, std::string(continuing ? "and " : "") + "false"); return;
        case RK::Not: line(depth, std::string(continuing ? "and " : "") + "not " + to_string(e.children.front())); return;
        }
    }

    const std::vector<Annotation>& ann_;
    const EventSpace& es_;
    const RenderOptions& opts_;
    std::ostringstream out_;
};

} // namespace

std::string render_nl(const std::vector<AndTree>& roots, const std::vector<Annotation>& annotations,
                      const EventSpace& es, const RenderOptions& opts) {
    return NlRenderer(annotations, es, opts).run(roots);
}

// ---------------------------------------------------------------------------
// Graph and record

namespace {

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

std::string render_graph(const std::vector<std::vector<AndTree>>& proofs) {
    std::ostringstream out;
    out << "digraph explanation {\n  node [shape=plaintext, fontname=\"monospace\"];\n";
    std::size_t next = 0;
    auto visit = [&](auto&& self, const AndTree& t) -> std::size_t {
        const std::size_t id = next++;
        out << "  n" << id << " [label=\"" << dot_escape(to_string(t.label)) << "\"];\n";
        for (const auto& c : t.children) {
            const std::size_t cid = self(self, c);
            out << "  n" << id << " -> n" << cid << ";\n";
        }
        if (t.expr) {
            const std::size_t box = next++;
            out << "  n" << box << " [label=\"\xE2\x96\xA1\", shape=box];\n";
            out << "  n" << id << " -> n" << box;
            if (t.expr->kind != RK::True)
                out << " [label=\"" << dot_escape(to_string(*t.expr)) << "\"]";
            out << ";\n";
        }
        return id;
    };
    for (const auto& roots : proofs)
        for (const auto& r : roots)
            visit(visit, r);
    out << "}\n";
    return out.str();
}

namespace {

nlohmann::ordered_json tree_record(const AndTree& t) {
    nlohmann::ordered_json j;
    j["literal"] = to_string(t.label);
    nlohmann::ordered_json kids = nlohmann::ordered_json::array();
    for (const auto& c : t.children)
        kids.push_back(tree_record(c));
    j["children"] = std::move(kids);
    if (t.expr)
        j["expr"] = to_string(*t.expr);
    return j;
}

} // namespace

std::string render_json(const Query& q, const std::vector<Explanation>& proofs) {
    nlohmann::ordered_json j;
    j["query"] = to_string(q);
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < proofs.size(); ++i) {
        nlohmann::ordered_json p;
        p["rank"] = i + 1;
        p["probability"] = proofs[i].probability;
        p["choice_expr"] = to_string(proofs[i].expr);
        nlohmann::ordered_json trees = nlohmann::ordered_json::array();
        for (const auto& r : proofs[i].roots)
            trees.push_back(tree_record(r));
        p["trees"] = std::move(trees);
        list.push_back(std::move(p));
    }
    j["proofs"] = std::move(list);
    return j.dump(2) + "\n";
}

} // namespace lpad
