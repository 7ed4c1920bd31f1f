#include <gtest/gtest.h>

#include "properties.hpp"

using namespace pqtest;

namespace {

constexpr int kCases = 1000;

void expect_holds(const std::optional<std::string>& failure) { EXPECT_FALSE(failure.has_value()) << *failure; }

TEST(Property, RequireProhibitPartition) { expect_holds(check_require_prohibit_partition(kCases)); }
TEST(Property, WhereIsASubsetOfItsInput) { expect_holds(check_where_subset(kCases)); }
TEST(Property, OptionalIsOutputsOrInput) { expect_holds(check_optional_outputs_or_input(kCases)); }
TEST(Property, TupleDistributesOverDot) { expect_holds(check_tuple_distributivity(kCases)); }
TEST(Property, BlockCardinalityIsMultiplicative) { expect_holds(check_block_cardinality(kCases)); }
TEST(Property, CountEmitsExactlyOnePerInput) { expect_holds(check_count_one(kCases)); }
TEST(Property, TopIsFirstKOfSort) { expect_holds(check_top_is_first_k_of_sort(kCases)); }
TEST(Property, KeyedTopIsFirstKOfKeyedSort) { expect_holds(check_keyed_top_is_first_k_of_sort(kCases)); }
TEST(Property, DedupIsIdempotent) { expect_holds(check_dedup_idempotent(kCases)); }
TEST(Property, OrderIsConsistentOnNonRecords) { expect_holds(check_order_consistency(kCases)); }
TEST(Property, LiteralRenderParseRoundTrip) { expect_holds(check_literal_round_trip(kCases)); }
TEST(Property, EvaluatorMatchesNaiveOracle) { expect_holds(check_oracle_equivalence(kCases, 1)); }

}  // namespace
