#include "creol2ta/creol/lexer.hpp"

#include <cctype>

namespace creol2ta::creol {

Lexer::Lexer(std::string_view src, DiagnosticList& diags, std::string file)
    : diags_(diags), file_(std::move(file)) {
    run(src);
}

void Lexer::run(std::string_view src) {
    std::size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto peek = [&](std::size_t off = 0) -> char {
        return i + off < src.size() ? src[i + off] : '\0';
    };
    auto push = [&](Tok k, std::string text, SourceLoc loc, long v = 0) {
        tokens_.push_back({k, std::move(text), v, loc});
    };

    while (i < src.size()) {
        char c = peek();
        SourceLoc loc{line, col};
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && peek() != '\n') advance(1);
            continue;
        }
        if (c == '/' && peek(1) == '*') {
            std::size_t start = i;
            advance(2);
            bool closed = false;
            while (i < src.size()) {
                if (peek() == '*' && peek(1) == '/') {
                    advance(2);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) diags_.error(loc, "unterminated block comment", file_);
            push(Tok::BlockComment, std::string(src.substr(start, i - start)), loc);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance(1);
            push(Tok::Ident, std::string(src.substr(start, i - start)), loc);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance(1);
            std::string text(src.substr(start, i - start));
            push(Tok::Int, text, loc, std::stol(text));
            continue;
        }
        switch (c) {
            case '(': push(Tok::LParen, "(", loc); advance(1); continue;
            case ')': push(Tok::RParen, ")", loc); advance(1); continue;
            case ',': push(Tok::Comma, ",", loc); advance(1); continue;
            case ';': push(Tok::Semi, ";", loc); advance(1); continue;
            case '.': push(Tok::Dot, ".", loc); advance(1); continue;
            case '?': push(Tok::Question, "?", loc); advance(1); continue;
            case '~': push(Tok::Tilde, "~", loc); advance(1); continue;
            case '+': push(Tok::Plus, "+", loc); advance(1); continue;
            case '-': push(Tok::Minus, "-", loc); advance(1); continue;
            case ':':
                if (peek(1) == '=') {
                    push(Tok::Assign, ":=", loc);
                    advance(2);
                } else {
                    push(Tok::Colon, ":", loc);
                    advance(1);
                }
                continue;
            case '=':
                if (peek(1) == '=') {
                    push(Tok::DefEq, "==", loc);
                    advance(2);
                    continue;
                }
                diags_.error(loc, "stray '=' (use ':=' or '==')", file_);
                advance(1);
                continue;
            case '!':
                if (peek(1) == '=') {
                    push(Tok::Ne, "!=", loc);
                    advance(2);
                } else {
                    push(Tok::Bang, "!", loc);
                    advance(1);
                }
                continue;
            case '<':
                if (peek(1) == '=') {
                    push(Tok::Le, "<=", loc);
                    advance(2);
                } else {
                    push(Tok::Lt, "<", loc);
                    advance(1);
                }
                continue;
            case '>':
                if (peek(1) == '=') {
                    push(Tok::Ge, ">=", loc);
                    advance(2);
                } else {
                    push(Tok::Gt, ">", loc);
                    advance(1);
                }
                continue;
            case '&':
                if (peek(1) == '&') {
                    push(Tok::AndAnd, "&&", loc);
                    advance(2);
                    continue;
                }
                diags_.error(loc, "stray '&'", file_);
                advance(1);
                continue;
            case '|':
                if (peek(1) == '|') {
                    push(Tok::OrOr, "||", loc);
                    advance(2);
                    continue;
                }
                diags_.error(loc, "stray '|'", file_);
                advance(1);
                continue;
            case '/':
                if (peek(1) == '\\') {
                    push(Tok::AndAnd, "/\\", loc);
                    advance(2);
                    continue;
                }
                diags_.error(loc, "stray '/'", file_);
                advance(1);
                continue;
            case '\\':
                if (peek(1) == '/') {
                    push(Tok::OrOr, "\\/", loc);
                    advance(2);
                    continue;
                }
                diags_.error(loc, "stray '\\'", file_);
                advance(1);
                continue;
            default:
                diags_.error(loc, std::string("unexpected character '") + c + "'", file_);
                advance(1);
                continue;
        }
    }
    tokens_.push_back({Tok::End, "", 0, {line, col}});
}

}  // namespace creol2ta::creol
