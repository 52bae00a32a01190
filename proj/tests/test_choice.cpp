#include "lpad/choice.hpp"
#include "lpad/error.hpp"
#include "support/support.hpp"

#include <doctest.h>

using namespace lpad;

namespace {

AtomicChoice ac(int clause, std::vector<std::string> theta, int head) { return {{clause, std::move(theta)}, head}; }
AtomicChoice p1(int clause, int head) { return ac(clause, {"p1"}, head); }
ChoiceExpr E(std::string_view s) { return parse_choice_expr(s); }
ChoiceFamily F(std::string_view s) { return parse_choice_family(s); }

const EventSpace& covid_space() {
    static const EventSpace es = lpad::testing::load_restricted("covid_neg.lpad").events();
    return es;
}

} // namespace

TEST_CASE("complements") {
    const auto& es = covid_space();
    CHECK(complement(p1(6, 1), es) == std::set<AtomicChoice>{p1(6, 2), p1(6, 3)});
    CHECK(complement(p1(3, 1), es).size() == 3);
    CHECK(complement(p1(4, 1), es) == std::set<AtomicChoice>{p1(4, 2)});
    CHECK_THROWS_AS(complement(ac(6, {"zz"}, 1), es), ProgramError);

    EventSpace single;
    single.add({{1, {}}, {}, {1.0}, {}});
    CHECK(complement(ac(1, {}, 1), single).empty());
}

TEST_CASE("consistency") {
    CHECK(consistent({p1(5, 1), p1(6, 2)}));
    CHECK_FALSE(consistent({p1(6, 2), p1(6, 3)}));
    CHECK(consistent({}));
}

TEST_CASE("mins") {
    const AtomicChoice a = p1(5, 1), b = p1(6, 2);
    CHECK(mins(ChoiceFamily{{a}, {a, b}}) == ChoiceFamily{{a}});
    CHECK(mins(ChoiceFamily{{p1(6, 1), p1(6, 2)}}).empty());
    CHECK(mins(ChoiceFamily{{}, {a}}) == ChoiceFamily{{}});
}

TEST_CASE("hits") {
    const AtomicChoice a = p1(5, 1), b = p1(6, 2);
    const auto h = hits({{a, b}});
    CHECK(ChoiceFamily(h.begin(), h.end()) == ChoiceFamily{{a}, {b}});
    CHECK(hits({}) == std::vector<CompositeChoice>{{}});

    const std::set<AtomicChoice> s1 = {p1(5, 2), p1(6, 1), p1(6, 3)};
    const std::set<AtomicChoice> s2 = {p1(5, 2), p1(6, 1), p1(6, 2)};
    const auto raw = hits({s1, s2});
    CHECK(raw.size() == 9);
    CHECK(mins(raw) == ChoiceFamily{{p1(5, 2)}, {p1(6, 1)}});
}

TEST_CASE("otimes") {
    const AtomicChoice a = p1(4, 1);
    CHECK(otimes(ChoiceFamily{{a}}, ChoiceFamily{{}}) == ChoiceFamily{{a}});
    CHECK(otimes(ChoiceFamily{{p1(6, 1)}}, ChoiceFamily{{p1(6, 2)}}).empty());
    CHECK(otimes(ChoiceFamily{{a}}, ChoiceFamily{{p1(5, 2)}, {p1(6, 1)}}) ==
          ChoiceFamily{{a, p1(5, 2)}, {a, p1(6, 1)}});
}

TEST_CASE("duals of the example families") {
    const auto& es = covid_space();
    CHECK(duals(ChoiceFamily{{p1(6, 1)}}, es) == ChoiceFamily{{p1(6, 2)}, {p1(6, 3)}});
    CHECK(duals(ChoiceFamily{{p1(5, 1), p1(6, 2)}, {p1(5, 1), p1(6, 3)}}, es) ==
          ChoiceFamily{{p1(5, 2)}, {p1(6, 1)}});
    CHECK(duals(ChoiceFamily{}, es) == ChoiceFamily{{}});
    CHECK(duals(ChoiceFamily{{}}, es).empty());
}

TEST_CASE("duals of the protected(p1) choices") {
    const auto& es = covid_space();
    const ChoiceFamily pro = {{p1(3, 1)}, {p1(4, 1), p1(5, 2)}, {p1(4, 1), p1(6, 1)}};
    const auto d = duals(pro, es);
    ChoiceFamily expected;
    for (int x = 2; x <= 4; ++x) {
        expected.insert({p1(3, x), p1(4, 2)});
        for (int y = 2; y <= 3; ++y)
            expected.insert({p1(3, x), p1(5, 1), p1(6, y)});
    }
    CHECK(d == expected);
    CHECK(d.size() == 9);
}

TEST_CASE("gamma") {
    const auto& es = covid_space();
    CHECK(gamma(ChoiceExpr::top(), es) == ChoiceFamily{{}});
    CHECK(gamma(ChoiceExpr::bottom(), es).empty());
    const auto a1 = p1(3, 1), a2 = p1(4, 1), a3 = p1(5, 1), a4 = p1(6, 1), a5 = ac(1, {"p2"}, 1);
    const auto e = ChoiceExpr::disj({ChoiceExpr::conj(ChoiceExpr::choice(a1), ChoiceExpr::choice(a2)),
                                     ChoiceExpr::choice(a3),
                                     ChoiceExpr::conj(ChoiceExpr::choice(a4), ChoiceExpr::choice(a5))});
    CHECK(gamma(e, es) == ChoiceFamily{{a1, a2}, {a3}, {a4, a5}});
    CHECK(gamma(ChoiceExpr::negation(ChoiceExpr::choice(a4)), es) == ChoiceFamily{{p1(6, 2)}, {p1(6, 3)}});
}

TEST_CASE("gamma of the second proof's expression has nine members") {
    const auto& es = covid_space();
    const auto c2 = E("(c2,[p1,p2],1) & (c1,[p2],1) & ~(c3,[p1],1) & ~(c4,[p1],1) | "
                      "(c2,[p1,p2],1) & (c1,[p2],1) & ~(c3,[p1],1) & (c5,[p1],1) & ~(c6,[p1],1)");
    CHECK(gamma(c2, es).size() == 9);
}

TEST_CASE("expression construction is canonical") {
    const auto a = ChoiceExpr::choice(p1(5, 1));
    const auto b = ChoiceExpr::choice(p1(6, 1));
    CHECK(ChoiceExpr::conj(a, b) == ChoiceExpr::conj(b, a));
    CHECK(ChoiceExpr::conj(std::vector<ChoiceExpr>{}).is_true());
    CHECK(ChoiceExpr::disj(std::vector<ChoiceExpr>{}).is_false());
    CHECK(ChoiceExpr::conj(std::vector{a}) == a);
    const auto nested = ChoiceExpr::conj(a, ChoiceExpr::conj(b, a));
    CHECK(nested.children().size() == 3);
    CHECK(ChoiceExpr().is_false());
}

TEST_CASE("simplify rules") {
    const auto& es = covid_space();
    CHECK(simplify(E("(c6,[p1],2) & ~(c6,[p1],1)"), es) == E("(c6,[p1],2)"));
    CHECK(simplify(E("(c6,[p1],2) & true"), es) == E("(c6,[p1],2)"));
    CHECK(simplify(E("(c6,[p1],2) & (c6,[p1],3)"), es).is_false());
    CHECK(simplify(E("(c6,[p1],2) & false"), es).is_false());
    CHECK(simplify(E("(c6,[p1],2) | true"), es).is_true());
    CHECK(simplify(E("(c5,[p1],1) | (c5,[p1],1) & (c6,[p1],1)"), es) == E("(c5,[p1],1)"));
    CHECK(simplify(E("(c5,[p1],1) & (c5,[p1],1)"), es) == E("(c5,[p1],1)"));
    const auto c = E("(c5,[p1],1) | (c6,[p1],2)");
    CHECK(simplify(ChoiceExpr::conj(c, ChoiceExpr::negation(c)), es).is_false());
}

TEST_CASE("dnf") {
    const auto& es = covid_space();
    CHECK(dnf(E("~(c5,[p1],1) | (c6,[p1],1)"), es) == dnf(E("~((c5,[p1],1) & ~(c6,[p1],1))"), es));
    CHECK(to_string(dnf(E("~((c5,[p1],1) & ~(c6,[p1],1))"), es)) == "~(c5,[p1],1) | (c6,[p1],1)");
    CHECK(dnf(E("~~(c5,[p1],1)"), es) == E("(c5,[p1],1)"));
    const auto a = E("~((c5,[p1],1) & (c6,[p1],1))");
    CHECK(equiv(dnf(a, es), E("~(c5,[p1],1) | ~(c6,[p1],1)"), es));
}

TEST_CASE("equiv") {
    const auto& es = covid_space();
    CHECK(equiv(E("(c5,[p1],1)"), E("(c5,[p1],1) & (c6,[p1],1) | (c5,[p1],1) & ~(c6,[p1],1)"), es));
    CHECK_FALSE(equiv(ChoiceExpr::top(), ChoiceExpr::bottom(), es));
    CHECK(equiv(E("~(c6,[p1],1)"), E("(c6,[p1],2) | (c6,[p1],3)"), es));
}

TEST_CASE("equiv refuses huge enumerations") {
    lpad::testing::Rng rng(3);
    const EventSpace es = lpad::testing::random_space(rng, 24, 2);
    std::vector<ChoiceExpr> leaves;
    for (const auto& info : es.instances())
        leaves.push_back(ChoiceExpr::choice({info.key, 1}));
    const auto big = ChoiceExpr::disj(leaves);
    CHECK_THROWS_AS(equiv(big, big, es), LimitError);
}

TEST_CASE("text forms round-trip") {
    const auto e = E("(c2,[p1,p2],1) & ~(c3,[p1],1) | (c5,[p1],1) & ~((c6,[p1],1) | (c3,[p1],2))");
    CHECK(parse_choice_expr(to_string(e)) == e);
    const auto k = F("{{(c6,[p1],1)},{}}");
    CHECK(k.size() == 2);
    CHECK(parse_choice_family(to_string(k)) == k);
    CHECK(to_string(ChoiceFamily{{p1(6, 2)}, {p1(6, 3)}}) == "{{(c6,[p1],2)},{(c6,[p1],3)}}");
    CHECK(to_string(ChoiceFamily{}) == "{}");
    CHECK(E("true").is_true());
    CHECK(E("(true)").is_true());
    CHECK_THROWS_AS(E("(x6,[p1],1)"), ParseError);
    CHECK_THROWS_AS(E("(c6,[p1],1) &"), ParseError);
}

TEST_CASE("validate") {
    const auto& es = covid_space();
    CHECK_NOTHROW(validate(E("(c6,[p1],3)"), es));
    CHECK_THROWS_AS(validate(E("(c6,[p1],4)"), es), ProgramError);
    CHECK_THROWS_AS(validate(F("{{(c9,[p1],1)}}"), es), ProgramError);
}

TEST_CASE("evaluation agrees with flattened evaluation") {
    lpad::testing::Rng rng(5);
    const EventSpace es = lpad::testing::random_space(rng, 4);
    const auto sel = lpad::testing::all_selections(es);
    std::vector<InstanceKey> order;
    for (const auto& info : es.instances())
        order.push_back(info.key);
    for (int i = 0; i < 100; ++i) {
        const auto e = lpad::testing::random_expr(rng, es, 4);
        const FlatExpr flat(e, order);
        for (const auto& s : sel) {
            std::vector<int> heads;
            for (const auto& a : s)
                heads.push_back(a.head);
            REQUIRE(flat.eval(heads.data()) == evaluate(e, lpad::testing::assignment_of(s)));
        }
    }
}
