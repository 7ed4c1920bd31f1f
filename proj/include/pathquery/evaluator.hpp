#pragma once

#include <optional>
#include <vector>

#include "pathquery/graph.hpp"
#include "pathquery/program.hpp"
#include "pathquery/stdlib.hpp"
#include "pathquery/value.hpp"

namespace pathquery {

struct EvalOptions {
    // Bound to ?params. Must be a Record when set.
    std::optional<Value> params;
    // Output of @roots; when unset @roots behaves like @entities.
    std::optional<std::vector<Value>> roots;
    // Consulted for external functions that were not bound at link time.
    const ExternalRegistry* externals = nullptr;
};

struct ResultPair {
    Value root;
    Value value;
};

// Multiset of (root, output) pairs in evaluation order.
struct QueryResult {
    std::vector<ResultPair> pairs;

    std::size_t total() const { return pairs.size(); }
};

// Runs the program's query over `graph`. Throws EvalError on runtime type
// errors, unregistered externals, stubs, and root-less record outputs.
QueryResult eval_query(const Program& program, const Graph& graph, const EvalOptions& options = {});

// Pairs sorted by root, then value, using `compare`; stable for ties.
std::vector<ResultPair> canonical_order(std::vector<ResultPair> pairs);

}  // namespace pathquery
