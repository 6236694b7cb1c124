#pragma once

#include <string>
#include <vector>

#include "creol2ta/diag.hpp"

namespace creol2ta::creol {

enum class Tok {
    End,
    Ident,
    Int,
    // punctuation / operators
    LParen, RParen,
    Comma, Semi, Colon, Dot,
    Assign,      // :=
    DefEq,       // ==  (method definition; also comparison inside expressions)
    Bang,        // !
    Question,    // ?
    Tilde,       // ~
    AndAnd,      // "&&" and the guard conjunction spelling
    OrOr,        // "||" and its dual
    Lt, Le, Gt, Ge, EqEq, Ne,
    Plus, Minus,
    BlockComment,  // raw text, surfaced so annotations can attach to statements
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    long value = 0;
    SourceLoc loc;
};

/// Tokenizes Creol source. Line comments are skipped; block comments are
/// kept as tokens because timing annotations live in them.
class Lexer {
public:
    Lexer(std::string_view src, DiagnosticList& diags, std::string file = {});

    const std::vector<Token>& tokens() const { return tokens_; }

private:
    void run(std::string_view src);
    DiagnosticList& diags_;
    std::string file_;
    std::vector<Token> tokens_;
};

}  // namespace creol2ta::creol
