#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pathquery/evaluator.hpp"

namespace pathquery {

struct CliStreams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    bool interactive = false;  // print REPL prompts
};

// Entry point of the `pathquery` tool. `args` excludes the program name.
// Returns the process exit code: 0 on success, 1 on any error.
int run_cli(const std::vector<std::string>& args, CliStreams io);

// `<root>: <value>` lines in canonical order, then `(total results: N)`.
// With `limit`, only the first `limit` pairs are listed; the total still
// counts every pair.
std::string format_text(const QueryResult& result, std::size_t limit = SIZE_MAX);

// JSON array of {"root": {...}, "value": {...}} in evaluation order, each
// value encoded as {"type": <type name>, "literal": <render_literal>}.
std::string format_json(const QueryResult& result, std::size_t limit = SIZE_MAX);

// Roots file: one node per line (`/x` or a literal), `#` comments.
std::vector<Value> load_roots_file(const std::string& path);

// Params file: a single record literal.
Value load_params_file(const std::string& path);

}  // namespace pathquery
