#include "pathquery/parser.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pathquery {

std::string_view filter_keyword(FilterKind k) {
    switch (k) {
        case FilterKind::Where: return "where";
        case FilterKind::Require: return "require";
        case FilterKind::Prohibit: return "prohibit";
        case FilterKind::Optional: return "optional";
    }
    return "?";
}

namespace {

struct AggregateName {
    AggregateKind kind;
    std::string_view name;
};

constexpr AggregateName kAggregates[] = {
    {AggregateKind::Count, "Count"}, {AggregateKind::Min, "Min"},     {AggregateKind::Max, "Max"},
    {AggregateKind::Sum, "Sum"},     {AggregateKind::Dedup, "Dedup"}, {AggregateKind::Slice, "Slice"},
    {AggregateKind::Top, "Top"},     {AggregateKind::Rtop, "Rtop"},   {AggregateKind::Sort, "Sort"},
};

bool is_literal_ctor(std::string_view name) {
    return name == "Id" || name == "Text" || name == "DateTime" || name == "Duration" || name == "Double" ||
           name == "Int";
}

}  // namespace

std::string_view aggregate_name(AggregateKind k) {
    for (const auto& a : kAggregates) {
        if (a.kind == k) return a.name;
    }
    return "?";
}

std::optional<AggregateKind> aggregate_from_name(std::string_view name) {
    for (const auto& a : kAggregates) {
        if (a.name == name) return a.kind;
    }
    return std::nullopt;
}

std::string Import::namespace_name() const {
    if (alias) return *alias;
    std::string stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    return stem;
}

namespace {

using namespace ast;

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string file) : toks_(std::move(tokens)), file_(std::move(file)) {
        if (toks_.empty() || !toks_.back().is(TokenKind::End)) toks_.push_back(Token{TokenKind::End, {}, {}});
    }

    Query query() {
        Query q;
        q.path = file_;
        q.imports = imports();
        while (at_definition()) {
            SourceLoc loc = peek().loc;
            ast::Def d = top_level_definition();
            if (std::holds_alternative<VarDef>(d) || std::holds_alternative<CollDef>(d)) {
                fail("variable and collection definitions are only allowed inside blocks", loc);
            }
            q.defs.push_back(std::move(d));
        }
        if (peek().is(TokenKind::End)) fail("empty query", peek().loc);
        if (peek().is_keyword("import")) fail("imports must precede definitions", peek().loc);
        q.root = path();
        if (!peek().is(TokenKind::End)) unexpected("after the query path");
        return q;
    }

    Module module() {
        Module m;
        m.path = file_;
        m.imports = imports();
        while (!peek().is(TokenKind::End)) {
            if (peek().is_keyword("import")) fail("imports must precede definitions", peek().loc);
            if (!at_definition()) fail("top-level path not allowed in module", peek().loc);
            SourceLoc loc = peek().loc;
            ast::Def d = top_level_definition();
            if (std::holds_alternative<VarDef>(d) || std::holds_alternative<CollDef>(d)) {
                fail("variable and collection definitions are only allowed inside blocks", loc);
            }
            m.defs.push_back(std::move(d));
        }
        return m;
    }

    Value literal_only() {
        Value v = literal_value();
        if (!peek().is(TokenKind::End)) unexpected("after the literal");
        return v;
    }

private:
    // -- token helpers -----------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }

    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    bool accept(TokenKind k) {
        if (!peek().is(k)) return false;
        next();
        return true;
    }

    bool accept_keyword(std::string_view kw) {
        if (!peek().is_keyword(kw)) return false;
        next();
        return true;
    }

    Token expect(TokenKind k, std::string_view context) {
        if (!peek().is(k)) {
            fail("expected " + std::string(token_kind_name(k)) + " " + std::string(context) + ", found " +
                     describe(peek()),
                 peek().loc);
        }
        return next();
    }

    void expect_keyword(std::string_view kw, std::string_view context) {
        if (!peek().is_keyword(kw)) {
            fail("expected '" + std::string(kw) + "' " + std::string(context) + ", found " + describe(peek()),
                 peek().loc);
        }
        next();
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case TokenKind::End: return "end of input";
            case TokenKind::String: return "string " + quote_string(t.text);
            case TokenKind::Variable: return "'?" + t.text + "'";
            case TokenKind::Collection: return "'$" + t.text + "'";
            case TokenKind::Special: return "'@" + t.text + "'";
            case TokenKind::RevPredicate: return "'!" + t.text + "'";
            default: return "'" + t.text + "'";
        }
    }

    [[noreturn]] void fail(const std::string& msg, SourceLoc loc) const { throw SyntaxError(msg, loc, file_); }

    [[noreturn]] void unexpected(std::string_view context) const {
        fail("unexpected " + describe(peek()) + " " + std::string(context), peek().loc);
    }

    // -- files -----------------------------------------------------------------

    std::vector<Import> imports() {
        std::vector<Import> out;
        while (peek().is_keyword("import")) {
            Import imp;
            imp.loc = next().loc;
            imp.path = expect(TokenKind::String, "after 'import'").text;
            if (accept_keyword("into")) {
                Token alias = peek();
                if (!alias.is(TokenKind::Ident)) fail("expected a namespace name after 'into'", alias.loc);
                next();
                imp.alias = alias.text;
            }
            out.push_back(std::move(imp));
        }
        return out;
    }

    bool at_definition() const {
        return peek().is_keyword("def") || peek().is_keyword("external") ||
               (peek().is_keyword("require") && peek(1).is_keyword("def"));
    }

    ast::Def top_level_definition() { return definition(); }

    // def ?x P | [require] def $c P | def [base|recur<N>] F(params) {..} |
    // external def [expr] F(params) implemented_by 'name'
    ast::Def definition() {
        if (peek().is_keyword("external")) return external_definition();
        bool required = accept_keyword("require");
        SourceLoc loc = peek().loc;
        expect_keyword("def", "to start a definition");
        if (peek().is(TokenKind::Variable)) {
            std::string name = next().text;
            if (name == "cur" || name == "root" || name == "params") fail("cannot redefine ?" + name, loc);
            return VarDef{name, path(), required};
        }
        if (peek().is(TokenKind::Collection)) {
            std::string name = next().text;
            return CollDef{name, path(), required};
        }
        if (required) fail("'require' applies only to variable and collection definitions", loc);
        FuncDef f;
        f.loc = loc;
        if (accept_keyword("base")) {
            f.kind = FuncKind::Base;
        } else if (accept_keyword("recur")) {
            f.kind = FuncKind::Recur;
            if (!peek().is(TokenKind::Lt)) fail("recur without bound; expected 'recur<N>'", peek().loc);
            next();
            Token n = expect(TokenKind::Int, "as the recursion bound");
            int bound = 0;
            auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), bound);
            if (ec != std::errc() || bound < 1) fail("recursion bound must be a positive integer", n.loc);
            f.bound = bound;
            expect(TokenKind::Gt, "to close the recursion bound");
        }
        Token name = peek();
        if (!name.is(TokenKind::Ident)) fail("expected a function name, found " + describe(name), name.loc);
        next();
        if (aggregate_from_name(name.text) || is_literal_ctor(name.text)) {
            fail("'" + name.text + "' is a reserved name", name.loc);
        }
        f.name = name.text;
        f.params = params();
        if (!peek().is(TokenKind::LBrace)) fail("expected '{' to start the function body", peek().loc);
        f.body = primary();
        return f;
    }

    ast::Def external_definition() {
        ExternalDef e;
        e.loc = next().loc;  // external
        expect_keyword("def", "after 'external'");
        e.expr = accept_keyword("expr");
        Token name = peek();
        if (!name.is(TokenKind::Ident)) fail("expected a function name, found " + describe(name), name.loc);
        next();
        e.name = name.text;
        e.params = params();
        expect_keyword("implemented_by", "after external function parameters");
        e.implemented_by = expect(TokenKind::String, "after 'implemented_by'").text;
        return e;
    }

    std::vector<Param> params() {
        std::vector<Param> out;
        expect(TokenKind::LParen, "to start the parameter list");
        if (accept(TokenKind::RParen)) return out;
        for (;;) {
            Token t = next();
            if (t.is(TokenKind::Variable)) {
                out.push_back(Param{t.text, false});
            } else if (t.is(TokenKind::Collection)) {
                out.push_back(Param{t.text, true});
            } else {
                fail("expected a '?variable' or '$collection' parameter, found " + describe(t), t.loc);
            }
            for (std::size_t i = 0; i + 1 < out.size(); ++i) {
                if (out[i].name == out.back().name) fail("duplicate parameter '" + t.text + "'", t.loc);
            }
            if (accept(TokenKind::RParen)) return out;
            expect(TokenKind::Comma, "between parameters");
        }
    }

    // -- paths -------------------------------------------------------------------

    ExprPtr path() { return comparison(); }

    ExprPtr comparison() {
        ExprPtr left = additive();
        const Token& t = peek();
        if (t.is(TokenKind::NotEq) || t.is(TokenKind::Lt) || t.is(TokenKind::Gt) || t.is(TokenKind::Le) ||
            t.is(TokenKind::Ge)) {
            fail("operator " + describe(t) + " is reserved; only '==' is supported", t.loc);
        }
        if (!t.is(TokenKind::EqEq)) return left;
        SourceLoc loc = next().loc;
        ExprPtr right = additive();
        if (peek().is(TokenKind::EqEq)) fail("comparisons cannot be chained", peek().loc);
        return make_expr(Compare{std::move(left), std::move(right)}, loc);
    }

    ExprPtr additive() {
        ExprPtr left = multiplicative();
        for (;;) {
            ArithOp op;
            if (peek().is(TokenKind::Plus)) {
                op = ArithOp::Add;
            } else if (peek().is(TokenKind::Minus)) {
                op = ArithOp::Sub;
            } else {
                return left;
            }
            SourceLoc loc = next().loc;
            ExprPtr right = multiplicative();
            left = make_expr(Arith{op, std::move(left), std::move(right)}, loc);
        }
    }

    ExprPtr multiplicative() {
        ExprPtr left = postfix();
        for (;;) {
            ArithOp op;
            if (peek().is(TokenKind::Star)) {
                op = ArithOp::Mul;
            } else if (peek().is(TokenKind::Slash)) {
                op = ArithOp::Div;
            } else if (peek().is(TokenKind::Predicate)) {
                // Operator position: `a/b` lexed as a predicate is division.
                split_predicate_as_division();
                op = ArithOp::Div;
            } else {
                return left;
            }
            SourceLoc loc = next().loc;
            ExprPtr right = postfix();
            left = make_expr(Arith{op, std::move(left), std::move(right)}, loc);
        }
    }

    // Replaces the Predicate token at the cursor with `/` followed by the
    // tokens of its label text.
    void split_predicate_as_division() {
        Token pred = toks_[pos_];
        std::vector<Token> rest = tokenize(std::string_view(pred.text).substr(1), file_);
        rest.pop_back();  // End
        for (auto& t : rest) {
            if (t.loc.line == 1) t.loc.column += pred.loc.column;
            t.loc.line += pred.loc.line - 1;
        }
        toks_[pos_] = Token{TokenKind::Slash, "/", pred.loc};
        toks_.insert(toks_.begin() + static_cast<std::ptrdiff_t>(pos_) + 1, rest.begin(), rest.end());
    }

    ExprPtr postfix() {
        ExprPtr e = primary();
        bool chained_access = false;
        for (;;) {
            if (peek().is(TokenKind::Dot)) {
                SourceLoc loc = next().loc;
                chained_access = false;
                if (peek().is_keyword("bind")) {
                    next();
                    expect(TokenKind::LParen, "after 'bind'");
                    Token v = expect(TokenKind::Variable, "inside bind(...)");
                    if (v.text == "cur" || v.text == "root" || v.text == "params") {
                        fail("cannot bind ?" + v.text, v.loc);
                    }
                    expect(TokenKind::RParen, "to close bind(...)");
                    e = make_expr(Bind{std::move(e), v.text}, loc);
                    continue;
                }
                ExprPtr right = primary();
                e = make_expr(ast::Dot{std::move(e), std::move(right)}, loc);
            } else if (peek().is(TokenKind::Arrow)) {
                SourceLoc loc = next().loc;
                Token name = next();
                if (!name.is(TokenKind::Ident) && !name.is(TokenKind::Keyword)) {
                    fail("expected a field name after '->', found " + describe(name), name.loc);
                }
                if (chained_access) {
                    e->as<FieldAccess>()->names.push_back(name.text);
                } else {
                    e = make_expr(FieldAccess{std::move(e), {name.text}}, loc);
                    chained_access = true;
                }
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        Token t = peek();
        switch (t.kind) {
            case TokenKind::Special:
                next();
                if (t.text == "entities") return make_expr(Entities{}, t.loc);
                if (t.text == "roots") return make_expr(Roots{}, t.loc);
                if (t.text == "merge") fail("'@merge' is only valid as a record field name", t.loc);
                fail("unknown special name '@" + t.text + "'", t.loc);
            case TokenKind::Predicate:
            case TokenKind::RevPredicate:
                next();
                return make_expr(Predicate{t.text, t.is(TokenKind::Predicate) ? Direction::Forward : Direction::Reverse},
                                 t.loc);
            case TokenKind::Int:
            case TokenKind::Double:
            case TokenKind::String:
            case TokenKind::Minus: return make_expr(Literal{literal_value()}, t.loc);
            case TokenKind::LBracket: {
                next();
                ExprPtr body = path();
                expect(TokenKind::RBracket, "to close the where clause");
                return make_expr(Filter{FilterKind::Where, std::move(body)}, t.loc);
            }
            case TokenKind::LParen: return parenthesized();
            case TokenKind::LBrace: return braces();
            case TokenKind::Variable:
                next();
                if (t.text == "cur") return make_expr(CurRef{}, t.loc);
                if (t.text == "root") return make_expr(RootRef{}, t.loc);
                if (t.text == "params") return make_expr(ParamsRef{}, t.loc);
                return make_expr(VarRef{t.text}, t.loc);
            case TokenKind::Collection: next(); return make_expr(CollRef{t.text}, t.loc);
            case TokenKind::Ident: return name_expression();
            case TokenKind::Keyword:
                if (t.text == "true" || t.text == "false") return make_expr(Literal{literal_value()}, t.loc);
                if (t.text == "require" || t.text == "prohibit" || t.text == "optional") {
                    next();
                    FilterKind k = t.text == "require"    ? FilterKind::Require
                                   : t.text == "prohibit" ? FilterKind::Prohibit
                                                          : FilterKind::Optional;
                    expect(TokenKind::LParen, "after '" + t.text + "'");
                    ExprPtr body = path();
                    expect(TokenKind::RParen, "to close '" + t.text + "(...)'");
                    return make_expr(Filter{k, std::move(body)}, t.loc);
                }
                if (t.text == "classify") return classify();
                if (t.text == "bind") fail("bind(...) must follow a path and '.'", t.loc);
                if (t.text == "def") fail("definitions are only allowed at top level or inside blocks", t.loc);
                break;
            default: break;
        }
        fail("expected a path, found " + describe(t), t.loc);
    }

    ExprPtr parenthesized() {
        SourceLoc loc = next().loc;
        std::vector<ExprPtr> items;
        bool trailing_comma = false;
        if (peek().is(TokenKind::RParen)) fail("empty tuple", peek().loc);
        for (;;) {
            items.push_back(path());
            if (accept(TokenKind::RParen)) break;
            expect(TokenKind::Comma, "between tuple elements");
            if (accept(TokenKind::RParen)) {
                trailing_comma = true;
                break;
            }
        }
        if (items.size() == 1 && !trailing_comma) return std::move(items.front());
        return make_expr(Tuple{std::move(items)}, loc);
    }

    bool at_field_start() const {
        std::size_t k = 0;
        if (peek().is_keyword("require")) k = 1;
        const Token& name = peek(k);
        bool name_ok = name.is(TokenKind::Ident) || (name.is(TokenKind::Special) && name.text == "merge") ||
                       (name.is(TokenKind::Keyword) && name.text != "def" && name.text != "require");
        return name_ok && peek(k + 1).is(TokenKind::Colon);
    }

    ExprPtr braces() {
        SourceLoc loc = expect(TokenKind::LBrace, "").loc;
        if (peek().is(TokenKind::RBrace)) fail("empty braces", peek().loc);
        if (at_field_start()) return record(loc);
        return block(loc);
    }

    ExprPtr record(SourceLoc loc) {
        RecordCtor r;
        while (!accept(TokenKind::RBrace)) {
            if (!at_field_start()) fail("expected a record field, found " + describe(peek()), peek().loc);
            ast::Field f;
            f.required = accept_keyword("require");
            Token name = next();
            f.name = name.is(TokenKind::Special) ? "@merge" : name.text;
            expect(TokenKind::Colon, "after the field name");
            f.value = path();
            r.fields.push_back(std::move(f));
        }
        return make_expr(std::move(r), loc);
    }

    ExprPtr block(SourceLoc loc) {
        Block b;
        for (;;) {
            BlockElement el;
            el.loc = peek().loc;
            if (at_definition()) {
                el.item = definition();
            } else {
                el.item = path();
            }
            b.elements.push_back(std::move(el));
            if (accept(TokenKind::RBrace)) break;
            expect(TokenKind::Semicolon, "between block elements");
            if (accept(TokenKind::RBrace)) break;
        }
        return make_expr(std::move(b), loc);
    }

    ExprPtr classify() {
        SourceLoc loc = next().loc;
        expect(TokenKind::LBrace, "after 'classify'");
        Classify c;
        while (!accept(TokenKind::RBrace)) {
            if (c.otherwise) fail("'else' must be the last classify case", peek().loc);
            if (accept_keyword("else")) {
                expect(TokenKind::Colon, "after 'else'");
                c.otherwise = path();
                continue;
            }
            ast::Case k;
            k.condition = path();
            expect(TokenKind::Colon, "after the classify condition");
            k.body = path();
            c.cases.push_back(std::move(k));
        }
        if (c.cases.empty() && !c.otherwise) fail("classify needs at least one case", loc);
        return make_expr(std::move(c), loc);
    }

    // Identifier at path position: literal constructor, aggregate, or call.
    ExprPtr name_expression() {
        Token name = next();
        if (is_literal_ctor(name.text) && peek().is(TokenKind::LParen)) {
            --pos_;
            return make_expr(Literal{literal_value()}, name.loc);
        }
        std::string ns;
        std::string fn = name.text;
        if (accept(TokenKind::ColonColon)) {
            ns = fn;
            Token inner = next();
            if (!inner.is(TokenKind::Ident)) fail("expected a function name after '::'", inner.loc);
            fn = inner.text;
        }
        if (!peek().is(TokenKind::LParen)) fail("expected '(' after function name '" + fn + "'", peek().loc);
        if (ns.empty()) {
            if (auto agg = aggregate_from_name(fn)) return aggregate(*agg, name.loc);
        }
        next();
        Call call{ns, fn, {}, nullptr};
        if (!accept(TokenKind::RParen)) {
            for (;;) {
                call.args.push_back(path());
                if (accept(TokenKind::RParen)) break;
                expect(TokenKind::Comma, "between arguments");
            }
        }
        return make_expr(std::move(call), name.loc);
    }

    ExprPtr aggregate(AggregateKind kind, SourceLoc loc) {
        std::string_view name = aggregate_name(kind);
        expect(TokenKind::LParen, "");
        Aggregate a{kind, {}, {}};
        if (peek().is(TokenKind::RParen)) fail(std::string(name) + " needs an argument", peek().loc);
        a.args.push_back(path());
        std::size_t fixed = 0;  // positional arguments after the body
        std::size_t optional_fixed = 0;
        bool takes_keys = false;
        switch (kind) {
            case AggregateKind::Count:
            case AggregateKind::Sum: break;
            case AggregateKind::Min:
            case AggregateKind::Max:
            case AggregateKind::Dedup:
            case AggregateKind::Sort: takes_keys = true; break;
            case AggregateKind::Slice:
                fixed = 1;
                optional_fixed = 1;
                break;
            case AggregateKind::Top:
            case AggregateKind::Rtop:
                fixed = 1;
                takes_keys = true;
                break;
        }
        for (std::size_t i = 0; i < fixed + optional_fixed; ++i) {
            if (!accept(TokenKind::Comma)) {
                if (i < fixed) fail(std::string(name) + " needs " + std::to_string(fixed + 1) + " arguments", peek().loc);
                break;
            }
            a.args.push_back(path());
        }
        while (accept(TokenKind::Comma)) {
            if (!takes_keys) fail("too many arguments to " + std::string(name), peek().loc);
            SortKey k;
            k.descending = accept(TokenKind::Minus);
            k.path = path();
            a.keys.push_back(std::move(k));
        }
        expect(TokenKind::RParen, "to close " + std::string(name) + "(...)");
        return make_expr(std::move(a), loc);
    }

    // -- literals ---------------------------------------------------------------

    static std::int64_t int_from(const std::string& digits, bool negative, SourceLoc loc, const std::string& file) {
        std::uint64_t mag = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), mag);
        constexpr std::uint64_t kMaxPos = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
        if (ec != std::errc() || ptr != digits.data() + digits.size() || mag > kMaxPos + (negative ? 1 : 0)) {
            throw SyntaxError("integer literal out of range: " + std::string(negative ? "-" : "") + digits, loc, file);
        }
        if (negative) return mag == kMaxPos + 1 ? std::numeric_limits<std::int64_t>::min() : -static_cast<std::int64_t>(mag);
        return static_cast<std::int64_t>(mag);
    }

    static double double_from(std::string_view text, SourceLoc loc, const std::string& file) {
        if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
        if (text == "-inf") return -std::numeric_limits<double>::infinity();
        if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
        std::string_view body = text;
        if (!body.empty() && body[0] == '+') body.remove_prefix(1);
        double d = 0;
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), d);
        if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
            throw SyntaxError("malformed Double literal '" + std::string(text) + "'", loc, file);
        }
        return d;
    }

    std::string ctor_string_arg(const Token& ctor) {
        Token s = next();
        if (!s.is(TokenKind::String)) fail("malformed literal: " + ctor.text + "(...) takes string arguments", s.loc);
        return s.text;
    }

    Value literal_value() {
        Token t = next();
        switch (t.kind) {
            case TokenKind::Minus: {
                Token n = next();
                if (n.is(TokenKind::Int)) return Value::integer(int_from(n.text, true, n.loc, file_));
                if (n.is(TokenKind::Double)) return Value::real(-double_from(n.text, n.loc, file_));
                fail("unary '-' is only supported on numeric literals", t.loc);
            }
            case TokenKind::Int: return Value::integer(int_from(t.text, false, t.loc, file_));
            case TokenKind::Double: return Value::real(double_from(t.text, t.loc, file_));
            case TokenKind::String: return Value::string(t.text);
            case TokenKind::Keyword:
                if (t.text == "true") return Value::boolean(true);
                if (t.text == "false") return Value::boolean(false);
                break;
            case TokenKind::LBrace: return record_literal(t);
            case TokenKind::Ident: {
                if (!is_literal_ctor(t.text)) break;
                expect(TokenKind::LParen, "after '" + t.text + "'");
                std::string a = ctor_string_arg(t);
                Value v;
                try {
                    if (t.text == "Id") {
                        v = Value::id(a);
                    } else if (t.text == "Text") {
                        expect(TokenKind::Comma, "between Text arguments");
                        v = Value::text(a, ctor_string_arg(t));
                    } else if (t.text == "DateTime") {
                        v = Value::date_time(DateTime::parse(a));
                    } else if (t.text == "Duration") {
                        v = Value::duration(Duration::parse(a));
                    } else if (t.text == "Double") {
                        v = Value::real(double_from(a, t.loc, file_));
                    } else {
                        std::string_view digits = a;
                        bool neg = !digits.empty() && digits[0] == '-';
                        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
                        if (digits.empty()) fail("malformed Int literal ''", t.loc);
                        v = Value::integer(int_from(std::string(digits), neg, t.loc, file_));
                    }
                } catch (const std::invalid_argument& e) {
                    fail(e.what(), t.loc);
                }
                expect(TokenKind::RParen, "to close " + t.text + "(...)");
                return v;
            }
            default: break;
        }
        fail("expected a literal, found " + describe(t), t.loc);
    }

    Value record_literal(const Token& open) {
        RecordBuilder b;
        while (!accept(TokenKind::RBrace)) {
            Token name = next();
            if (!name.is(TokenKind::Ident) && !name.is(TokenKind::Keyword)) {
                fail("expected a record field name, found " + describe(name), name.loc);
            }
            expect(TokenKind::Colon, "after the field name");
            b.add(name.text, literal_value());
        }
        if (b.empty()) fail("empty record literal", open.loc);
        return Value::record(std::move(b).build());
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string file_;
};

}  // namespace

Query parse_query(std::vector<Token> tokens, const std::string& file) {
    return Parser(std::move(tokens), file).query();
}

Query parse_query(std::string_view source, const std::string& file) {
    return parse_query(tokenize(source, file), file);
}

Module parse_module(std::vector<Token> tokens, const std::string& file) {
    return Parser(std::move(tokens), file).module();
}

Module parse_module(std::string_view source, const std::string& file) {
    return parse_module(tokenize(source, file), file);
}

Value parse_literal(std::string_view source) { return Parser(tokenize(source), {}).literal_only(); }

}  // namespace pathquery
