#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pathquery/ast.hpp"
#include "pathquery/lexer.hpp"

namespace pathquery {

// Query file: imports, function definitions, then exactly one path.
Query parse_query(std::vector<Token> tokens, const std::string& file = {});
Query parse_query(std::string_view source, const std::string& file = {});

// Module file: imports and function / external definitions only.
Module parse_module(std::vector<Token> tokens, const std::string& file = {});
Module parse_module(std::string_view source, const std::string& file = {});

// A single literal value in query syntax, including record literals such as
// `{ f: 5 g: 'x' }`. Surrounding whitespace and comments are allowed.
Value parse_literal(std::string_view source);

// Source rendering. Output reparses to the same tree.
std::string render_expr(const Expr& e);
std::string render_query(const Query& q);
std::string render_module(const Module& m);

// Indented structural dump, one node per line.
std::string dump_expr(const Expr& e, int indent = 0);
std::string dump_query(const Query& q);
std::string dump_module(const Module& m);

}  // namespace pathquery
