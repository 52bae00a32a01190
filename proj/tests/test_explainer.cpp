#include "lpad/error.hpp"
#include "lpad/explainer.hpp"
#include "support/support.hpp"

#include <json.hpp>

#include <doctest.h>

#include <cmath>

using namespace lpad;
using lpad::testing::fixture_path;
using lpad::testing::load_restricted;
using lpad::testing::read_file;

namespace {

const GroundProgram& neg_program() {
    static const GroundProgram g = load_restricted("covid_neg.lpad");
    return g;
}

std::vector<Explanation> covid_p1() { return explain(parse_query("covid(p1)"), neg_program()); }

bool all_ground(const AndTree& t) {
    if (!t.label.atom.is_ground())
        return false;
    return std::all_of(t.children.begin(), t.children.end(), all_ground);
}

std::size_t count_nodes(const AndTree& t) {
    std::size_t n = 1;
    for (const auto& c : t.children)
        n += count_nodes(c);
    return n;
}

// Readable tree with pruned leaves already gone, compared against the
// source expression mapped leafwise.
bool same_shape(const ReadableExpr& r, const ChoiceExpr& e, const EventSpace& es) {
    using K = ChoiceExpr::Kind;
    switch (e.kind()) {
    case K::True: return r.kind == ReadableExpr::Kind::True;
    case K::False: return r.kind == ReadableExpr::Kind::False;
    case K::Choice: {
        const auto& a = e.choice();
        return r.kind == ReadableExpr::Kind::Literal && r.positive && r.origin == a &&
               r.atom == es.at(a.instance).heads.at(static_cast<std::size_t>(a.head - 1));
    }
    case K::Not:
        if (e.operand().kind() == K::Choice)
            return r.kind == ReadableExpr::Kind::Literal && !r.positive && r.origin == e.operand().choice();
        return r.kind == ReadableExpr::Kind::Not && same_shape(r.children.front(), e.operand(), es);
    case K::And:
    case K::Or:
        if (r.kind != (e.kind() == K::And ? ReadableExpr::Kind::And : ReadableExpr::Kind::Or) ||
            r.children.size() != e.children().size())
            return false;
        for (std::size_t i = 0; i < r.children.size(); ++i)
            if (!same_shape(r.children[i], e.children()[i], es))
                return false;
        return true;
    }
    return false;
}

} // namespace

TEST_CASE("ranked proofs of covid(p1)") {
    const auto proofs = covid_p1();
    REQUIRE(proofs.size() == 2);
    CHECK(std::abs(proofs[0].probability - 0.9) < 1e-9);
    CHECK(std::abs(proofs[1].probability - 0.147168) < 1e-9);

    const auto pos = explain(parse_query("covid(p1)"), load_restricted("covid_pos.lpad"));
    REQUIRE(pos.size() == 2);
    CHECK(std::abs(pos[0].probability - 0.9) < 1e-9);
    CHECK(std::abs(pos[1].probability - 0.36) < 1e-9);

    CHECK(explain(parse_query("covid(p3)"), neg_program()).empty());
}

TEST_CASE("AND-tree shapes") {
    const auto proofs = covid_p1();
    REQUIRE(proofs[0].roots.size() == 1);
    const AndTree& first = proofs[0].roots[0];
    CHECK(to_string(first.label) == "covid(p1)");
    REQUIRE(first.children.size() == 1);
    CHECK(to_string(first.children[0].label) == "pcr(p1)");
    CHECK(first.children[0].children.empty());

    const AndTree& second = proofs[1].roots[0];
    REQUIRE(second.children.size() == 3);
    CHECK(to_string(second.children[0].label) == "contact(p1,p2)");
    CHECK(to_string(second.children[1].label) == "covid(p2)");
    REQUIRE(second.children[1].children.size() == 1);
    CHECK(to_string(second.children[1].children[0].label) == "pcr(p2)");
    const AndTree& negnode = second.children[2];
    CHECK(negnode.is_negative());
    CHECK(negnode.children.empty());
    REQUIRE(negnode.expr);
    CHECK(to_string(*negnode.expr) ==
          "\\+ffp2(p1) & \\+vaccinated(p1) | \\+ffp2(p1) & vulnerable(p1) & \\+young(p1)");
    CHECK(count_nodes(second) + 1 == 6); // plus the box child

    // a fact on its own
    const auto fact = explain(parse_query("pcr(p1)"), neg_program());
    REQUIRE(fact.size() == 1);
    CHECK(fact[0].roots[0].children.empty());
    CHECK(render_text(fact[0].roots, neg_program().events()) == "pcr(p1)\n");
}

TEST_CASE("every label is ground and ranking is a sorted permutation") {
    for (const char* f : {"covid_pos.lpad", "covid_neg.lpad"}) {
        const GroundProgram g = load_restricted(f);
        for (const char* q : {"covid(p1)", "covid(p2)", "flu(p1)", "protected(p1)", "\\+protected(p1)", "vulnerable(p1)"}) {
            const Query query = parse_query(q);
            const auto proofs = explain(query, g);
            const auto leaves = build_tree(query, g).success_leaves();
            CHECK(proofs.size() == leaves.size());
            std::set<std::size_t> order;
            for (std::size_t i = 0; i < proofs.size(); ++i) {
                order.insert(proofs[i].leaf_order);
                for (const auto& r : proofs[i].roots)
                    CHECK(all_ground(r));
                if (i)
                    CHECK(proofs[i - 1].probability >= proofs[i].probability);
                if (i && proofs[i - 1].probability == proofs[i].probability)
                    CHECK(proofs[i - 1].leaf_order < proofs[i].leaf_order);
            }
            CHECK(order.size() == proofs.size());
        }
    }
}

TEST_CASE("backpropagation grounds every step") {
    const GroundProgram g = load_restricted("covid_pos.lpad");
    const auto t = build_tree(parse_query("covid(X)"), g);
    for (const auto& d : derivations(t)) {
        const auto b = backpropagate(d);
        for (const auto& s : b.steps)
            CHECK(is_ground(s.query));
        const std::string root = to_string(b.steps.front().query);
        CHECK((root == "covid(p1)" || root == "covid(p2)"));
    }
    const auto ground_d = derivations(build_tree(parse_query("covid(p1)"), g));
    for (const auto& d : ground_d) {
        const auto b = backpropagate(d);
        for (std::size_t i = 0; i < d.steps.size(); ++i)
            CHECK(b.steps[i].query == d.steps[i].query);
    }
}

TEST_CASE("chq") {
    const auto& es = neg_program().events();
    CHECK(chq(ChoiceExpr::top(), es).kind == ReadableExpr::Kind::True);
    const auto e = parse_choice_expr("~(c3,[p1],1) & ~(c4,[p1],1) | ~(c3,[p1],1) & (c5,[p1],1) & ~(c6,[p1],1)");
    const auto r = chq(e, es);
    CHECK(to_string(r) == "\\+ffp2(p1) & \\+vaccinated(p1) | \\+ffp2(p1) & vulnerable(p1) & \\+young(p1)");
    CHECK(same_shape(r, e, es));
    // pruning the negated atom itself
    const auto pruned = chq(e, es, parse_atom("ffp2(p1)"));
    CHECK(to_string(pruned) == "\\+vaccinated(p1) | vulnerable(p1) & \\+young(p1)");
    const auto gone = chq(parse_choice_expr("~(c3,[p1],1) | (c4,[p1],1)"), es, parse_atom("ffp2(p1)"));
    CHECK(gone.kind == ReadableExpr::Kind::True);
    // none heads show as the word none
    const auto n = chq(parse_choice_expr("(c6,[p1],3)"), es);
    CHECK(to_string(n) == "none");
}

TEST_CASE("chq keeps the dnf structure on random leaf expressions") {
    lpad::testing::Rng rng(8);
    const auto& es = neg_program().events();
    for (int i = 0; i < 200; ++i) {
        const auto e = dnf(lpad::testing::random_expr(rng, es, 3), es);
        CHECK(same_shape(chq(e, es), e, es));
    }
}

TEST_CASE("golden renderings of the second proof") {
    const GroundProgram& g = neg_program();
    const auto es = g.events();
    const auto proofs = covid_p1();
    const auto& roots = proofs[1].roots;
    CHECK(render_text(roots, es) == read_file(fixture_path("golden/proof2.txt")));
    CHECK(render_nl(roots, g.annotations, es) == read_file(fixture_path("golden/proof2.nl")));
    RenderOptions fold;
    fold.fold_depth = 1;
    CHECK(render_text(roots, es, fold) == read_file(fixture_path("golden/proof2_fold1.txt")));
    CHECK(render_graph({roots}) == read_file(fixture_path("golden/proof2.dot")));
}

TEST_CASE("alternatives listing") {
    const GroundProgram& g = neg_program();
    const auto es = g.events();
    RenderOptions alt;
    alt.alternatives = true;
    const std::string text = render_text(covid_p1()[1].roots, es, alt);
    CHECK(text.find("\\+ffp2(p1) {surgical(p1), cloth(p1), none}") != std::string::npos);
    CHECK(text.find("\\+young(p1) {adult(p1), none}") != std::string::npos);
}

TEST_CASE("natural language pieces") {
    const auto& ann = neg_program().annotations;
    CHECK(literal_sentence(Literal::pos(parse_atom("covid(p1)")), ann) == "p1 has covid-19");
    CHECK(literal_sentence(Literal::neg(parse_atom("protected(p1)")), ann) == "p1 was not protected");
    CHECK(literal_sentence(Literal::neg(parse_atom("ffp2(p1)")), ann) == "p1 didn't wear an ffp2 mask");
    CHECK(literal_sentence(Literal::pos(parse_atom("flu(p1)")), ann) == "flu(p1)");
    CHECK(literal_sentence(Literal::neg(parse_atom("flu(p1)")), ann) == "\\+flu(p1)");
    const std::vector<Annotation> odd = {{parse_atom("likes(A,B)"), false, "A likes B"}};
    CHECK(literal_sentence(Literal::neg(parse_atom("likes(x,y)")), odd) == "it is not the case that x likes y");
    const auto fact = explain(parse_query("covid(p1)"), neg_program())[0].roots;
    CHECK(render_nl(fact, ann, neg_program().events()) ==
          "p1 has covid-19 because\n   the pcr test of p1 was positive\n");
}

TEST_CASE("graphs of several proofs are separate components") {
    const auto proofs = covid_p1();
    const std::string dot = render_graph({proofs[0].roots, proofs[1].roots});
    CHECK(dot.find("n0 -> n1;") != std::string::npos);
    CHECK(dot.find("n0 -> n2") == std::string::npos);
    CHECK(dot.find("n2 -> n3;") != std::string::npos);
    const auto leaf = explain(parse_query("pcr(p1)"), neg_program());
    const std::string one = render_graph({leaf[0].roots});
    CHECK(one.find("n0 [label=\"pcr(p1)\"]") != std::string::npos);
    CHECK(one.find("->") == std::string::npos);
}

TEST_CASE("json record") {
    const auto proofs = covid_p1();
    const auto j = nlohmann::json::parse(render_json(parse_query("covid(p1)"), proofs));
    CHECK(j["query"] == "covid(p1)");
    REQUIRE(j["proofs"].size() == 2);
    CHECK(j["proofs"][1]["rank"] == 2);
    CHECK(std::abs(j["proofs"][1]["probability"].get<double>() - 0.147168) < 1e-9);
    const auto& root = j["proofs"][1]["trees"][0];
    CHECK(root["literal"] == "covid(p1)");
    CHECK(root["children"].size() == 3);
    CHECK(root["children"][2]["expr"].is_string());
}
