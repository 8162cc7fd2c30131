#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "pregax/core.hpp"

namespace pregax::detail {

enum class Tok { ident, number, string, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

// Punctuation: ( ) { } , ; . + : / = and the arrows -> ==> - -/
inline std::vector<Token> tokenize(const std::string &src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Tok::ident;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Tok::number;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
            if (j >= src.size() || src[j] != '"') throw ParseError("syntax", line, col, "unterminated string");
            t.kind = Tok::string;
            t.text = src.substr(i + 1, j - i - 1);
            advance(j - i + 1);
        } else {
            t.kind = Tok::punct;
            auto starts = [&](const char *s) { return src.compare(i, std::char_traits<char>::length(s), s) == 0; };
            if (starts("==>")) {
                t.text = "==>";
            } else if (starts("->")) {
                t.text = "->";
            } else if (starts("-/")) {
                t.text = "-/";
            } else if (std::string("(){},;.+:/=-").find(c) != std::string::npos) {
                t.text = std::string(1, c);
            } else {
                throw ParseError("syntax", line, col, std::string("unexpected character '") + c + "'");
            }
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token &peek(std::size_t ahead = 0) const {
        std::size_t k = pos_ + ahead;
        return k < toks_.size() ? toks_[k] : toks_.back();
    }
    const Token &next() {
        const Token &t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == Tok::end; }
    bool is_punct(const std::string &p, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::punct && peek(ahead).text == p;
    }
    bool is_ident(const std::string &word, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::ident && peek(ahead).text == word;
    }
    bool accept(const std::string &p) {
        if (is_punct(p)) {
            next();
            return true;
        }
        return false;
    }
    void expect(const std::string &p) {
        if (!accept(p)) fail("expected '" + p + "'");
    }
    std::string expect_ident() {
        if (peek().kind != Tok::ident) fail("expected identifier");
        return next().text;
    }
    [[noreturn]] void fail(const std::string &msg, const std::string &code = "syntax") const {
        const Token &t = peek();
        std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        throw ParseError(code, t.line, t.column, msg + ", found " + found);
    }
    [[noreturn]] void fail_at(const Token &t, const std::string &code, const std::string &msg) const {
        throw ParseError(code, t.line, t.column, msg);
    }

    std::size_t position() const { return pos_; }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace pregax::detail
