#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pqtest {

// Each check runs `cases` random cases from a seed derived from its name and
// returns a description of the first counterexample, or nothing.
using PropertyCheck = std::function<std::optional<std::string>(int cases)>;

struct NamedProperty {
    std::string name;
    PropertyCheck check;
};

std::optional<std::string> check_require_prohibit_partition(int cases);
std::optional<std::string> check_where_subset(int cases);
std::optional<std::string> check_optional_outputs_or_input(int cases);
std::optional<std::string> check_tuple_distributivity(int cases);
std::optional<std::string> check_block_cardinality(int cases);
std::optional<std::string> check_count_one(int cases);
std::optional<std::string> check_top_is_first_k_of_sort(int cases);
std::optional<std::string> check_keyed_top_is_first_k_of_sort(int cases);
std::optional<std::string> check_dedup_idempotent(int cases);
std::optional<std::string> check_order_consistency(int cases);
std::optional<std::string> check_literal_round_trip(int cases);

// Evaluator against the naive oracle: `graphs` random graphs with
// `queries_per_graph` random restricted-fragment queries each.
std::optional<std::string> check_oracle_equivalence(int graphs, int queries_per_graph);

// The algebraic property suite, in a fixed order.
const std::vector<NamedProperty>& property_suite();

}  // namespace pqtest
