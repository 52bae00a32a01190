#pragma once

// Tokenizer shared by the `.lpad` parser and the choice-expression reader.

#include "lpad/error.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace lpad::detail {

enum class Tok {
    Name,      // lower-case identifier
    Var,       // upper-case or `_` identifier
    Number,    // 0.4, 1, 2e-3
    List,      // [p1,p2] kept as one constant
    String,    // "..." with \" and \\ escapes, text holds the unescaped value
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Colon,
    Neck,      // :-
    Dot,
    Naf,       // \+
    Amp,
    Bar,
    Tilde,
    Read,      // %!read
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const noexcept { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    bool accept(Tok kind) {
        if (current_.kind != kind)
            return false;
        advance();
        return true;
    }

    Token expect(Tok kind, const char* what) {
        if (current_.kind != kind)
            fail(std::string("expected ") + what + ", found " + describe(current_));
        return next();
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, current_.line, current_.column);
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End)
            return "end of input";
        return "'" + t.text + "'";
    }

private:
    char at(std::size_t off = 0) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }

    void bump() {
        if (at() == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    static bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
    static bool is_upper(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident(char c) { return is_lower(c) || is_upper(c) || is_digit(c); }

    void skip_space_and_comments() {
        for (;;) {
            char c = at();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '%' && src_.substr(pos_, 6) != "%!read") {
                while (at() != '\n' && at() != '\0')
                    bump();
            } else {
                return;
            }
        }
    }

    void advance() {
        skip_space_and_comments();
        current_ = Token{};
        current_.line = line_;
        current_.column = col_;
        const std::size_t start = pos_;
        char c = at();
        auto single = [&](Tok k) {
            bump();
            current_.kind = k;
            current_.text = std::string(src_.substr(start, pos_ - start));
        };
        if (c == '\0') {
            current_.kind = Tok::End;
        } else if (c == '%') {
            for (int i = 0; i < 6; ++i)
                bump();
            current_.kind = Tok::Read;
            current_.text = "%!read";
        } else if (is_lower(c) || is_upper(c)) {
            while (is_ident(at()))
                bump();
            current_.kind = is_lower(c) ? Tok::Name : Tok::Var;
            current_.text = std::string(src_.substr(start, pos_ - start));
        } else if (is_digit(c)) {
            lex_number(start);
        } else if (c == '[') {
            lex_list();
        } else if (c == '"') {
            lex_string();
        } else if (c == ':') {
            bump();
            if (at() == '-') {
                bump();
                current_.kind = Tok::Neck;
                current_.text = ":-";
            } else {
                current_.kind = Tok::Colon;
                current_.text = ":";
            }
        } else if (c == '\\' && at(1) == '+') {
            bump();
            bump();
            current_.kind = Tok::Naf;
            current_.text = "\\+";
        } else {
            switch (c) {
            case '(': single(Tok::LParen); break;
            case ')': single(Tok::RParen); break;
            case '{': single(Tok::LBrace); break;
            case '}': single(Tok::RBrace); break;
            case ',': single(Tok::Comma); break;
            case ';': single(Tok::Semicolon); break;
            case '.': single(Tok::Dot); break;
            case '&': single(Tok::Amp); break;
            case '|': single(Tok::Bar); break;
            case '~': single(Tok::Tilde); break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
            }
        }
    }

    void lex_number(std::size_t start) {
        while (is_digit(at()))
            bump();
        if (at() == '.' && is_digit(at(1))) {
            bump();
            while (is_digit(at()))
                bump();
        }
        if ((at() == 'e' || at() == 'E') &&
            (is_digit(at(1)) || ((at(1) == '-' || at(1) == '+') && is_digit(at(2))))) {
            bump();
            if (at() == '-' || at() == '+')
                bump();
            while (is_digit(at()))
                bump();
        }
        current_.kind = Tok::Number;
        current_.text = std::string(src_.substr(start, pos_ - start));
    }

    // `[a, b]` becomes the single constant `[a,b]`.
    void lex_list() {
        bump();
        std::string text = "[";
        bool need_item = false;
        for (;;) {
            while (at() == ' ' || at() == '\t')
                bump();
            char c = at();
            if (c == ']' && !need_item) {
                bump();
                break;
            }
            if (is_ident(c)) {
                while (is_ident(at()))
                    text += at(), bump();
            } else {
                throw ParseError("malformed constant list", line_, col_);
            }
            while (at() == ' ' || at() == '\t')
                bump();
            if (at() == ',') {
                bump();
                text += ",";
                need_item = true;
            } else if (at() == ']') {
                need_item = false;
            } else {
                throw ParseError("malformed constant list", line_, col_);
            }
        }
        current_.kind = Tok::List;
        current_.text = text + "]";
    }

    void lex_string() {
        bump();
        std::string text;
        for (;;) {
            char c = at();
            if (c == '\0' || c == '\n')
                throw ParseError("unterminated string", line_, col_);
            if (c == '"') {
                bump();
                break;
            }
            if (c == '\\' && (at(1) == '"' || at(1) == '\\')) {
                bump();
                c = at();
            }
            text += c;
            bump();
        }
        current_.kind = Tok::String;
        current_.text = std::move(text);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    Token current_;
};

} // namespace lpad::detail
