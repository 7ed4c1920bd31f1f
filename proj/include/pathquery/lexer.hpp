#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pathquery/error.hpp"

namespace pathquery {

enum class TokenKind {
    Ident,
    Keyword,
    Int,           // unsigned digits; sign is applied by the parser
    Double,        // unsigned decimal / exponent form
    String,        // text holds the unescaped contents
    Predicate,     // text holds the label, e.g. "/name"
    RevPredicate,  // `!/name`; text holds "/name"
    Variable,      // `?x`; text holds "x"
    Collection,    // `$c` or `%c`; text holds "c"
    Special,       // `@entities`; text holds "entities"
    Dot,
    Comma,
    Semicolon,
    Colon,
    ColonColon,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    EqEq,
    NotEq,
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    End,
};

std::string_view token_kind_name(TokenKind k);

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    SourceLoc loc;

    bool is(TokenKind k) const { return kind == k; }
    bool is_keyword(std::string_view kw) const { return kind == TokenKind::Keyword && text == kw; }
};

bool is_keyword(std::string_view word);

// Splits source text into tokens, dropping whitespace and `//` comments. The
// result always ends with an End token.
std::vector<Token> tokenize(std::string_view source, const std::string& file = {});

}  // namespace pathquery
