#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathquery/value.hpp"

namespace pathquery {

// One labelled edge. Subject and object are never records.
struct Triple {
    Value subject;
    std::string predicate;
    Value object;
};

// Immutable edge-labelled graph with subject and object indexes. Edge lists
// keep first-seen order; duplicate triples collapse.
class Graph {
public:
    Graph() = default;

    // Throws std::invalid_argument for record nodes or bad predicates.
    static Graph from_triples(std::span<const Triple> triples);

    std::span<const Triple> triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }

    std::span<const Value> out_edges(const Value& node, std::string_view predicate) const;
    std::span<const Value> in_edges(const Value& node, std::string_view predicate) const;

    // Distinct subjects plus distinct Id-typed objects, in first-seen order.
    std::span<const Value> all_entities() const { return entities_; }

private:
    using EdgeMap = std::map<std::string, std::vector<Value>, std::less<>>;
    using Index = std::map<Value, EdgeMap, ValueLess>;

    static std::span<const Value> lookup(const Index& index, const Value& node, std::string_view predicate);

    std::vector<Triple> triples_;
    Index spo_;
    Index ops_;
    std::vector<Value> entities_;
};

// Node token as used in triple and roots files: `/x` is shorthand for
// Id('/x'); anything else is a literal. Throws SyntaxError.
Value parse_node(std::string_view token);
std::string render_node(const Value& v);

// Tab-separated triple text: subject, predicate, object per line. Blank lines
// and lines starting with `#` are ignored. Throws GraphError.
Graph load_graph(std::string_view source);
Graph load_graph_file(const std::filesystem::path& path);

// Inverse of load_graph.
std::string render_graph(const Graph& g);

}  // namespace pathquery
