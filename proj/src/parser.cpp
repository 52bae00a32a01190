#include "lexer.hpp"
#include "lpad/error.hpp"
#include "lpad/syntax.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>

namespace lpad {

namespace {

using detail::Lexer;
using detail::Tok;
using detail::Token;

constexpr double kSumTolerance = 1e-9;

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    Program program() {
        Program p;
        while (lex_.peek().kind != Tok::End) {
            if (lex_.peek().kind == Tok::Read)
                p.annotations.push_back(annotation());
            else
                clause(p);
        }
        check_partition(p);
        return p;
    }

    Query query() {
        Query q;
        if (lex_.peek().kind == Tok::Name && lex_.peek().text == "true") {
            lex_.next();
        } else {
            q = body();
        }
        lex_.accept(Tok::Dot);
        lex_.expect(Tok::End, "end of query");
        return q;
    }

    Atom lone_atom() {
        Atom a = atom();
        lex_.accept(Tok::Dot);
        lex_.expect(Tok::End, "end of atom");
        return a;
    }

private:
    Term term() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Tok::Var: return Term::variable(lex_.next().text);
        case Tok::Name:
        case Tok::Number:
        case Tok::List: return Term::constant(lex_.next().text);
        default: lex_.fail("expected a term, found " + Lexer::describe(t));
        }
    }

    Atom atom() {
        const Token& t = lex_.peek();
        if (t.kind != Tok::Name)
            lex_.fail("expected an atom, found " + Lexer::describe(t));
        if (t.text == kNonePredicate)
            lex_.fail("'none' is reserved for the implicit head");
        Atom a{lex_.next().text, {}};
        if (lex_.accept(Tok::LParen)) {
            a.args.push_back(term());
            while (lex_.accept(Tok::Comma))
                a.args.push_back(term());
            lex_.expect(Tok::RParen, "')'");
        }
        return a;
    }

    Literal literal() {
        bool positive = !lex_.accept(Tok::Naf);
        return {positive, atom()};
    }

    Query body() {
        Query q;
        q.push_back(literal());
        while (lex_.accept(Tok::Comma))
            q.push_back(literal());
        return q;
    }

    double probability() {
        Token t = lex_.expect(Tok::Number, "a probability");
        double value = 0.0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size())
            throw ParseError("malformed probability '" + t.text + "'", t.line, t.column);
        if (value < 0.0 || value > 1.0)
            throw ParseError("probability " + t.text + " outside [0,1]", t.line, t.column);
        return value;
    }

    void clause(Program& p) {
        const Token start = lex_.peek();
        struct RawHead {
            Atom atom;
            std::optional<double> prob;
        };
        std::vector<RawHead> heads;
        do {
            RawHead h{atom(), std::nullopt};
            if (lex_.accept(Tok::Colon))
                h.prob = probability();
            heads.push_back(std::move(h));
        } while (lex_.accept(Tok::Semicolon));

        Query b;
        if (lex_.accept(Tok::Neck))
            b = body();
        lex_.expect(Tok::Dot, "'.' at end of clause");

        const bool annotated = heads.front().prob.has_value();
        for (const auto& h : heads)
            if (h.prob.has_value() != annotated)
                throw ParseError("either every head or no head carries a probability", start.line,
                                 start.column);

        if (!annotated) {
            if (heads.size() > 1)
                throw ParseError("disjunctive head without probabilities", start.line, start.column);
            p.derived_clauses.push_back({std::move(heads.front().atom), std::move(b)});
            return;
        }

        ProbClause c;
        c.id = static_cast<int>(p.prob_clauses.size()) + 1;
        double sum = 0.0;
        for (auto& h : heads) {
            sum += *h.prob;
            c.heads.push_back({std::move(h.atom), *h.prob});
        }
        if (sum > 1.0 + kSumTolerance)
            throw ParseError("head probabilities sum to " + format_probability(sum) + " > 1",
                             start.line, start.column);
        if (sum < 1.0 - kSumTolerance)
            c.heads.push_back({Atom{std::string(kNonePredicate), {}}, 1.0 - sum});
        c.body = std::move(b);
        p.prob_clauses.push_back(std::move(c));
    }

    Annotation annotation() {
        lex_.expect(Tok::Read, "%!read");
        Literal l = literal();
        Token as = lex_.expect(Tok::Name, "'as'");
        if (as.text != "as")
            throw ParseError("expected 'as'", as.line, as.column);
        lex_.expect(Tok::Colon, "':'");
        Token text = lex_.expect(Tok::String, "a quoted template");
        Annotation a{std::move(l.atom), !l.positive, text.text};
        check_placeholders(a, text);
        return a;
    }

    // Placeholders are words written like variables with no lower-case
    // letters (`A`, `X1`, `_P`); each must name a pattern variable.
    static void check_placeholders(const Annotation& a, const Token& where) {
        const auto vars = variables(a.pattern);
        const std::string& s = a.text;
        std::size_t i = 0;
        auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
        while (i < s.size()) {
            if (!ident(s[i])) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < s.size() && ident(s[j]))
                ++j;
            const std::string word = s.substr(i, j - i);
            const bool looks_like_var =
                ((word[0] >= 'A' && word[0] <= 'Z') || word[0] == '_') &&
                std::none_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; });
            if (looks_like_var &&
                std::find(vars.begin(), vars.end(), word) == vars.end())
                throw ParseError("placeholder '" + word + "' is not a variable of " +
                                     to_string(a.pattern),
                                 where.line, where.column);
            i = j;
        }
    }

    static void check_partition(const Program& p) {
        const auto prob = p.probabilistic_predicates();
        for (const auto& c : p.derived_clauses)
            if (prob.contains(c.head.signature()))
                throw ProgramError("predicate " + c.head.signature().to_string() +
                                   " heads both probabilistic and derived clauses");
    }

    Lexer lex_;
};

} // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

Query parse_query(std::string_view text) { return Parser(text).query(); }

Atom parse_atom(std::string_view text) { return Parser(text).lone_atom(); }

} // namespace lpad
