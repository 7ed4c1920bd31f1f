#include "pathquery/lexer.hpp"

#include <array>
#include <cctype>

namespace pathquery {

namespace {

constexpr std::array kKeywords = {
    "import", "into",     "def",      "base",     "recur", "external", "implemented_by", "expr",
    "require", "prohibit", "optional", "classify", "else",  "bind",     "true",           "false",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
public:
    Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            SourceLoc loc{line_, col_};
            if (at_end()) {
                out.push_back(Token{TokenKind::End, {}, loc});
                return out;
            }
            out.push_back(next(loc));
        }
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg, SourceLoc loc) const { throw SyntaxError(msg, loc, file_); }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                return;
            }
        }
    }

    std::string read_ident() {
        std::string s;
        while (!at_end() && ident_char(peek())) s += advance();
        return s;
    }

    // `/seg(/seg)*`; the first segment must start like an identifier so that
    // `55/2` still lexes as division.
    std::string read_label() {
        std::string s;
        s += advance();  // '/'
        s += read_ident();
        while (peek() == '/' && ident_char(peek(1))) {
            s += advance();
            s += read_ident();
        }
        return s;
    }

    std::string read_name_after_sigil(char sigil, SourceLoc loc) {
        advance();
        if (!ident_start(peek())) fail(std::string("expected a name after '") + sigil + "'", loc);
        return read_ident();
    }

    Token read_number(SourceLoc loc) {
        std::string s;
        bool is_double = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            is_double = true;
            s += advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t k = 1;
            if (peek(1) == '+' || peek(1) == '-') k = 2;
            if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
                is_double = true;
                for (std::size_t i = 0; i < k; ++i) s += advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
            }
        }
        if (ident_char(peek())) fail("malformed number literal", loc);
        return Token{is_double ? TokenKind::Double : TokenKind::Int, s, loc};
    }

    Token read_string(SourceLoc loc) {
        char quote = advance();
        std::string s;
        for (;;) {
            if (at_end() || peek() == '\n') fail("unterminated string literal", loc);
            char c = advance();
            if (c == quote) break;
            if (c != '\\') {
                s += c;
                continue;
            }
            if (at_end()) fail("unterminated string literal", loc);
            char e = advance();
            switch (e) {
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                case 'r': s += '\r'; break;
                case '\\': s += '\\'; break;
                case '\'': s += '\''; break;
                case '"': s += '"'; break;
                case 'x': {
                    int v = 0;
                    for (int i = 0; i < 2; ++i) {
                        char h = at_end() ? '\0' : advance();
                        if (!std::isxdigit(static_cast<unsigned char>(h))) fail("malformed \\x escape", loc);
                        v = v * 16 + (std::isdigit(static_cast<unsigned char>(h)) ? h - '0' : (std::tolower(h) - 'a' + 10));
                    }
                    s += static_cast<char>(v);
                    break;
                }
                default: fail(std::string("unknown escape '\\") + e + "'", loc);
            }
        }
        return Token{TokenKind::String, s, loc};
    }

    Token simple(TokenKind k, std::size_t len, SourceLoc loc) {
        std::string s;
        for (std::size_t i = 0; i < len; ++i) s += advance();
        return Token{k, s, loc};
    }

    Token next(SourceLoc loc) {
        char c = peek();
        if (ident_start(c)) {
            std::string word = read_ident();
            return Token{is_keyword(word) ? TokenKind::Keyword : TokenKind::Ident, word, loc};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return read_number(loc);
        switch (c) {
            case '\'':
            case '"': return read_string(loc);
            case '/':
                if (ident_start(peek(1))) return Token{TokenKind::Predicate, read_label(), loc};
                return simple(TokenKind::Slash, 1, loc);
            case '!':
                if (peek(1) == '/' && ident_start(peek(2))) {
                    advance();
                    return Token{TokenKind::RevPredicate, read_label(), loc};
                }
                if (peek(1) == '=') return simple(TokenKind::NotEq, 2, loc);
                fail("expected a predicate after '!'", loc);
            case '?': return Token{TokenKind::Variable, read_name_after_sigil('?', loc), loc};
            case '$':
            case '%': return Token{TokenKind::Collection, read_name_after_sigil(c, loc), loc};
            case '@': return Token{TokenKind::Special, read_name_after_sigil('@', loc), loc};
            case '.': return simple(TokenKind::Dot, 1, loc);
            case ',': return simple(TokenKind::Comma, 1, loc);
            case ';': return simple(TokenKind::Semicolon, 1, loc);
            case ':': return peek(1) == ':' ? simple(TokenKind::ColonColon, 2, loc) : simple(TokenKind::Colon, 1, loc);
            case '{': return simple(TokenKind::LBrace, 1, loc);
            case '}': return simple(TokenKind::RBrace, 1, loc);
            case '(': return simple(TokenKind::LParen, 1, loc);
            case ')': return simple(TokenKind::RParen, 1, loc);
            case '[': return simple(TokenKind::LBracket, 1, loc);
            case ']': return simple(TokenKind::RBracket, 1, loc);
            case '-': return peek(1) == '>' ? simple(TokenKind::Arrow, 2, loc) : simple(TokenKind::Minus, 1, loc);
            case '=':
                if (peek(1) == '=') return simple(TokenKind::EqEq, 2, loc);
                fail("unexpected '=' (did you mean '==')", loc);
            case '<': return peek(1) == '=' ? simple(TokenKind::Le, 2, loc) : simple(TokenKind::Lt, 1, loc);
            case '>': return peek(1) == '=' ? simple(TokenKind::Ge, 2, loc) : simple(TokenKind::Gt, 1, loc);
            case '+': return simple(TokenKind::Plus, 1, loc);
            case '*': return simple(TokenKind::Star, 1, loc);
            default: break;
        }
        fail(std::string("invalid character '") + c + "'", loc);
    }

    std::string_view src_;
    const std::string& file_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

}  // namespace

bool is_keyword(std::string_view word) {
    for (const char* kw : kKeywords) {
        if (word == kw) return true;
    }
    return false;
}

std::string_view token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::Ident: return "identifier";
        case TokenKind::Keyword: return "keyword";
        case TokenKind::Int: return "integer";
        case TokenKind::Double: return "double";
        case TokenKind::String: return "string";
        case TokenKind::Predicate: return "predicate";
        case TokenKind::RevPredicate: return "reverse predicate";
        case TokenKind::Variable: return "variable";
        case TokenKind::Collection: return "collection";
        case TokenKind::Special: return "special name";
        case TokenKind::Dot: return "'.'";
        case TokenKind::Comma: return "','";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Colon: return "':'";
        case TokenKind::ColonColon: return "'::'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::Arrow: return "'->'";
        case TokenKind::EqEq: return "'=='";
        case TokenKind::NotEq: return "'!='";
        case TokenKind::Lt: return "'<'";
        case TokenKind::Gt: return "'>'";
        case TokenKind::Le: return "'<='";
        case TokenKind::Ge: return "'>='";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
    return Lexer(source, file).run();
}

}  // namespace pathquery
