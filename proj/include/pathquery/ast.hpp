#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pathquery/error.hpp"
#include "pathquery/value.hpp"

namespace pathquery {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Callable;  // resolved function, see program.hpp

enum class Direction { Forward, Reverse };
enum class FilterKind { Where, Require, Prohibit, Optional };
enum class ArithOp { Add, Sub, Mul, Div };
enum class AggregateKind { Count, Min, Max, Sum, Dedup, Slice, Top, Rtop, Sort };

std::string_view filter_keyword(FilterKind k);
std::string_view aggregate_name(AggregateKind k);
std::optional<AggregateKind> aggregate_from_name(std::string_view name);

namespace ast {

struct Entities {};
struct Roots {};
struct CurRef {};
struct RootRef {};
struct ParamsRef {};

struct Literal {
    Value value;
};

struct Predicate {
    std::string label;
    Direction direction = Direction::Forward;
};

struct Dot {
    ExprPtr left;
    ExprPtr right;
};

struct Filter {
    FilterKind kind;
    ExprPtr body;
};

struct Tuple {
    std::vector<ExprPtr> branches;  // at least one
};

struct VarDef {
    std::string name;
    ExprPtr body;
    bool required = false;
};

struct CollDef {
    std::string name;
    ExprPtr body;
    bool required = false;
};

struct Param {
    std::string name;
    bool collection = false;
};

enum class FuncKind { Plain, Base, Recur };

struct FuncDef {
    std::string name;
    std::vector<Param> params;
    FuncKind kind = FuncKind::Plain;
    int bound = 0;  // recur<N> only
    ExprPtr body;
    SourceLoc loc;
};

struct ExternalDef {
    std::string name;
    std::vector<Param> params;
    std::string implemented_by;
    bool expr = false;  // `external def expr ...`; recorded, no semantics
    SourceLoc loc;
};

using Def = std::variant<VarDef, CollDef, FuncDef, ExternalDef>;

struct BlockElement {
    std::variant<ExprPtr, Def> item;
    SourceLoc loc;
};

struct Block {
    std::vector<BlockElement> elements;
};

struct Case {
    ExprPtr condition;
    ExprPtr body;
};

struct Classify {
    std::vector<Case> cases;  // at least one case or an else body
    ExprPtr otherwise;        // null: identity
};

struct Field {
    std::string name;  // "@merge" for the merge field
    bool required = false;
    ExprPtr value;

    bool is_merge() const { return name == "@merge"; }
};

struct RecordCtor {
    std::vector<Field> fields;
};

struct FieldAccess {
    ExprPtr base;
    std::vector<std::string> names;  // at least one
};

struct Compare {
    ExprPtr left;
    ExprPtr right;
};

struct Arith {
    ArithOp op;
    ExprPtr left;
    ExprPtr right;
};

struct Bind {
    ExprPtr body;
    std::string var;
};

struct VarRef {
    std::string name;
};

struct CollRef {
    std::string name;
};

struct Call {
    std::string ns;  // empty when unqualified
    std::string name;
    std::vector<ExprPtr> args;
    const Callable* target = nullptr;  // filled in by the resolver
};

struct SortKey {
    ExprPtr path;
    bool descending = false;
};

struct Aggregate {
    AggregateKind kind;
    // Body first; then L and optional O for Slice, K for Top/Rtop.
    std::vector<ExprPtr> args;
    std::vector<SortKey> keys;
};

}  // namespace ast

struct Expr {
    using Node = std::variant<ast::Entities, ast::Roots, ast::Literal, ast::Predicate, ast::Dot, ast::Filter, ast::Tuple,
                              ast::Block, ast::Classify, ast::RecordCtor, ast::FieldAccess, ast::Compare, ast::Arith,
                              ast::Bind, ast::VarRef, ast::CollRef, ast::Call, ast::Aggregate, ast::CurRef, ast::RootRef,
                              ast::ParamsRef>;

    Node node;
    SourceLoc loc;

    template <typename T>
    const T* as() const { return std::get_if<T>(&node); }
    template <typename T>
    T* as() { return std::get_if<T>(&node); }
};

template <typename T>
ExprPtr make_expr(T node, SourceLoc loc = {}) {
    return std::make_unique<Expr>(Expr{Expr::Node(std::move(node)), loc});
}

struct Import {
    std::string path;
    std::optional<std::string> alias;
    SourceLoc loc;

    // `alias`, or the file stem of `path`.
    std::string namespace_name() const;
};

// A parsed module file: imports plus function / external definitions.
struct Module {
    std::string path;
    std::vector<Import> imports;
    std::vector<ast::Def> defs;
};

// A parsed query file: like a module, plus the query path itself.
struct Query {
    std::string path;
    std::vector<Import> imports;
    std::vector<ast::Def> defs;
    ExprPtr root;
};

}  // namespace pathquery
