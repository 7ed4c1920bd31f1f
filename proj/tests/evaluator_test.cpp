#include <gtest/gtest.h>

#include <chrono>

#include "pathquery/error.hpp"
#include "pathquery/parser.hpp"
#include "test_support.hpp"

using namespace pqtest;

namespace {

const Graph& g1() {
    static const Graph g = fixture_graph("g1.pqt");
    return g;
}

const Graph& g2() {
    static const Graph g = fixture_graph("g2.pqt");
    return g;
}

// Output values only, sorted.
std::vector<std::string> values(const std::string& src, const Graph& g = g1(), const EvalOptions& o = {},
                                const ExternalRegistry* reg = nullptr) {
    std::vector<std::string> out;
    for (const auto& p : run(src, g, o, reg).pairs) out.push_back(render_literal(p.value));
    std::sort(out.begin(), out.end());
    return out;
}

// Output values in evaluation order.
std::vector<std::string> ordered(const std::string& src, const Graph& g = g1()) {
    std::vector<std::string> out;
    for (const auto& p : run(src, g).pairs) out.push_back(render_literal(p.value));
    return out;
}

using Strings = std::vector<std::string>;

std::string eval_message(const std::string& src, const EvalOptions& o = {}) {
    try {
        run(src, g1(), o);
    } catch (const EvalError& e) {
        return e.message();
    }
    return "<no error>";
}

// -- whole queries ------------------------------------------------------------

TEST(EvalQuery, AttractionsV1) {
    QueryResult r = run_fixture_query("attractions_v1.pq", g1());
    EXPECT_EQ(multiset(r), (Strings{"Id('/z/fun') -> Text('FunPark', 'en')", "Id('/z/moma') -> Text('MoMA', 'en')",
                                    "Id('/z/moma') -> Text('MoMA', 'es')"}));
    EXPECT_EQ(r.total(), 3u);
    EXPECT_EQ(counts_by_root(r).count("Id('/z/ghost')"), 0u);
}

TEST(EvalQuery, LiteralIsItsOwnRoot) {
    QueryResult r = run("5", g1());
    EXPECT_EQ(multiset(r), Strings{"5 -> 5"});
    EXPECT_EQ(multiset(run("5", Graph{})), Strings{"5 -> 5"});
}

TEST(EvalQuery, RootsFollowTheFirstSource) {
    QueryResult r = run("@entities./exhibit./price", g1());
    EXPECT_EQ(multiset(r), Strings{"Id('/z/moma') -> 25"});
    EXPECT_EQ(multiset(run("@entities./exhibit.?root", g1())), Strings{"Id('/z/moma') -> Id('/z/moma')"});
}

TEST(EvalQuery, AggregateOverWholeQueryMapsToItself) {
    EXPECT_EQ(multiset(run("Count(@entities)", g1())), Strings{"7 -> 7"});
}

TEST(EvalQuery, RootlessRecordIsAnError) {
    EXPECT_EQ(eval_message("{ f: 5 }"), "query output has no root value; a record cannot be a root");
}

TEST(EvalQuery, ParamsMustBeARecord) {
    EvalOptions o;
    o.params = Value::integer(3);
    EXPECT_EQ(eval_message("?params", o), "?params must be a Record, got Int");
    o.params = parse_literal("{ k: 4 }");
    EXPECT_EQ(values("?params->k", g1(), o), Strings{"4"});
    EXPECT_TRUE(values("?params->k").empty());
}

// -- sources ------------------------------------------------------------------

TEST(EvalSource, EntitiesMatchesEnumeration) {
    std::vector<std::string> expected;
    for (const auto& t : g1().triples()) {
        for (const Value* v : {&t.subject, &t.object}) {
            if (!v->is(Type::Id)) continue;
            std::string s = render_literal(*v);
            if (std::find(expected.begin(), expected.end(), s) == expected.end()) expected.push_back(s);
        }
    }
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(values("@entities"), expected);
    EXPECT_EQ(expected.size(), 7u);
}

TEST(EvalSource, RootsSuppliedOrDefault) {
    EvalOptions o;
    o.roots = std::vector<Value>{Value::id("/z/moma")};
    EXPECT_EQ(multiset(run("@roots", g1(), o)), Strings{"Id('/z/moma') -> Id('/z/moma')"});
    EXPECT_EQ(multiset(run("@roots", g1())), multiset(run("@entities", g1())));
}

// -- predicates and dot ----------------------------------------------------

TEST(EvalPredicate, ForwardReverseAndNonEntity) {
    EXPECT_EQ(values("Id('/z/moma')./name"), (Strings{"Text('MoMA', 'en')", "Text('MoMA', 'es')"}));
    EXPECT_EQ(values("Id('/z/e1').!/exhibit"), Strings{"Id('/z/moma')"});
    EXPECT_TRUE(values("7./name").empty());
}

TEST(EvalDot, Composition) {
    EXPECT_EQ(values("Id('/z/moma')./exhibit./price"), Strings{"25"});
    EXPECT_TRUE(values("Id('/z/nothing')./a./b").empty());
}

// -- filters ----------------------------------------------------------------

TEST(EvalFilter, Require) { EXPECT_TRUE(values("Id('/z/ghost').require(/name)").empty()); }

TEST(EvalFilter, Prohibit) {
    EXPECT_EQ(values("(Id('/z/fun'), Id('/z/moma')).prohibit(/permanently_closed.[?cur])"), Strings{"Id('/z/moma')"});
}

TEST(EvalFilter, WhereFalse) {
    EXPECT_TRUE(values("Id('/z/moma').[false]").empty());
    EXPECT_EQ(values("Id('/z/moma').[0]"), Strings{"Id('/z/moma')"});
    EXPECT_EQ(values("Id('/z/moma').[(false, true)]"), Strings{"Id('/z/moma')"});
}

TEST(EvalFilter, OptionalFallsBackToInput) {
    EXPECT_EQ(values("(Id('/z/ghost'), Id('/z/moma')).optional(/name)"),
              (Strings{"Id('/z/ghost')", "Text('MoMA', 'en')", "Text('MoMA', 'es')"}));
}

// -- tuple and block ------------------------------------------------------

TEST(EvalTuple, Union) {
    EXPECT_EQ(values("Id('/z/moma').(/exhibit, /ride)"), Strings{"Id('/z/e1')"});
    EXPECT_EQ(values("Id('/z/fun').(/exhibit, /ride)"), Strings{"Id('/z/r1')"});
    EXPECT_EQ(values("(1, 1, 2)"), (Strings{"1", "1", "2"}));
}

TEST(EvalBlock, Multiplicative) {
    EXPECT_EQ(values("Id('/z/moma').{ /name; /type }"), (Strings{"Id('/museum')", "Id('/museum')"}));
    EXPECT_TRUE(values("Id('/z/ghost').{ require(/name); ?cur }").empty());
}

TEST(EvalBlock, DefinitionsAreScoped) {
    EXPECT_EQ(values("Id('/z/moma').{ def ?n Count(/name); ?n }"), Strings{"2"});
    EXPECT_TRUE(values("Id('/z/moma').{ def ?n 1; ?n }.?n").empty());
    // bind survives the block.
    EXPECT_EQ(values("Id('/z/moma').{ /exhibit.bind(?e); 1 }.?e"), Strings{"Id('/z/e1')"});
}

TEST(EvalBlock, RequiredCollection) {
    EXPECT_EQ(values("Id('/z/moma').{ require def $prices /exhibit./price; Sum($prices) / Count($prices) }"),
              Strings{"25.0"});
    EXPECT_TRUE(values("Id('/z/ghost').{ require def $prices /exhibit./price; Sum($prices) / Count($prices) }").empty());
    // Without require the block continues, then divides by zero.
    EXPECT_TRUE(values("Id('/z/ghost').{ def $prices /exhibit./price; Sum($prices) / Count($prices) }").empty());
}

// -- classify -------------------------------------------------------------

const char* kRoute = ".classify { [/type == Id('/museum')]: { /exhibit } [/type == Id('/theme_park')]: { /ride } }";

TEST(EvalClassify, FirstMatchingCase) {
    EXPECT_EQ(values(std::string("Id('/z/moma')") + kRoute), Strings{"Id('/z/e1')"});
    EXPECT_EQ(values(std::string("Id('/z/fun')") + kRoute), Strings{"Id('/z/r1')"});
    EXPECT_EQ(values(std::string("7") + kRoute), Strings{"7"});
    EXPECT_EQ(values("7.classify { [false]: { 1 } else: { 2 } }"), Strings{"2"});
}

TEST(EvalClassify, LaterCasesAreNotEvaluated) {
    int first = 0;
    int second = 0;
    ExternalRegistry reg;
    reg.register_external("First", [&](std::span<const std::vector<Value>>) {
        ++first;
        return std::vector<Value>{Value::boolean(true)};
    });
    reg.register_external("Second", [&](std::span<const std::vector<Value>>) {
        ++second;
        return std::vector<Value>{Value::boolean(true)};
    });
    std::string src =
        "external def A(?x) implemented_by 'First'\n"
        "external def B(?x) implemented_by 'Second'\n"
        "(1, 2, 3).classify { [A(?cur)]: { 'a' } [B(?cur)]: { 'b' } }";
    EvalOptions o;
    o.externals = &reg;
    EXPECT_EQ(values(src, g1(), o, &reg), (Strings{"'a'", "'a'", "'a'"}));
    EXPECT_EQ(first, 3);
    EXPECT_EQ(second, 0);
}

// -- compare and arithmetic ---------------------------------------------

TEST(EvalCompare, Existential) {
    EXPECT_EQ(values("Id('/z/moma')./type == (Id('/museum'), Id('/theme_park'))"), Strings{"true"});
    EXPECT_EQ(values("Id('/z/fun')./type == Id('/museum')"), Strings{"false"});
    EXPECT_EQ(values("Id('/z/ghost')./name == /name"), Strings{"false"});
    EXPECT_EQ(values("5 == 5.0"), Strings{"true"});
}

TEST(EvalArith, Numeric) {
    EXPECT_EQ(values("55 / 2"), Strings{"27.5"});
    EXPECT_EQ(values("2 * 3"), Strings{"6"});
    EXPECT_EQ(values("2 + 0.5"), Strings{"2.5"});
    EXPECT_EQ(values("(1, 2) + (10, 20)"), (Strings{"11", "12", "21", "22"}));
    EXPECT_TRUE(values("1 + 'x'").empty());
    EXPECT_TRUE(values("1 / 0").empty());
    EXPECT_EQ(eval_message("9223372036854775807 + 1"), "integer overflow");
}

// -- aggregates ---------------------------------------------------------

TEST(EvalAggregate, Count) {
    EXPECT_EQ(values("Id('/z/moma').Count(/name)"), Strings{"2"});
    EXPECT_EQ(values("Id('/z/ghost').Count(/name)"), Strings{"0"});
}

TEST(EvalAggregate, Sum) {
    EXPECT_EQ(values("Sum((25, 30))"), Strings{"55"});
    EXPECT_TRUE(values("Sum((1, 'x'))").empty());
    EXPECT_EQ(values("Sum((1, 2.5))"), Strings{"3.5"});
    EXPECT_EQ(values("Id('/z/ghost').Sum(/price)"), Strings{"0"});
}

TEST(EvalAggregate, MinMax) {
    EXPECT_EQ(values("Min((3, 1, 2))"), Strings{"1"});
    EXPECT_EQ(values("Max((3, 1, 2))"), Strings{"3"});
    EXPECT_TRUE(values("Id('/z/ghost').Min(/name)").empty());
}

TEST(EvalCollection, Sort) {
    EXPECT_EQ(ordered("Sort((3, 1, 2))"), (Strings{"1", "2", "3"}));
    EXPECT_EQ(ordered("Sort((3, 1, 2), -?cur)"), (Strings{"3", "2", "1"}));
}

TEST(EvalCollection, TopAndRtop) {
    EXPECT_EQ(values("Top((3, 1, 2), 2)"), (Strings{"1", "2"}));
    EXPECT_EQ(values("Rtop((3, 1, 2), 2)"), (Strings{"2", "3"}));
    EXPECT_TRUE(values("Top((3, 1, 2), 0)").empty());
}

TEST(EvalCollection, Dedup) {
    EXPECT_EQ(values("Dedup((Text('a', 'en'), Text('a', 'en'), Text('a', 'fr')))"),
              (Strings{"Text('a', 'en')", "Text('a', 'fr')"}));
    EXPECT_EQ(values("Dedup((1, 1.0, 2))").size(), 2u);
}

TEST(EvalCollection, Slice) {
    EXPECT_EQ(ordered("Slice(Sort((5, 4, 3, 2, 1)), 2, 1)"), (Strings{"2", "3"}));
    EXPECT_EQ(ordered("Slice(Sort((5, 4, 3)), 10)"), (Strings{"3", "4", "5"}));
    EXPECT_NE(eval_message("Slice((1, 2), -1)"), "<no error>");
}

TEST(EvalCollection, SortByRecordField) {
    EXPECT_EQ(ordered("Id('/z/moma').Sort(({ k: 2 v: 'b' }, { k: 1 v: 'a' }), ?cur->k)->v"), (Strings{"'a'", "'b'"}));
}

// -- records ------------------------------------------------------------

TEST(EvalRecord, RequiredFields) {
    const std::string rec = ".{ id: ?cur require name: /name.[TextLang() == 'en'] }";
    EXPECT_TRUE(values("Id('/z/ghost')" + rec).empty());
    EXPECT_EQ(values("Id('/z/moma')" + rec), Strings{render_literal(parse_literal(
                                                  "{ id: Id('/z/moma') name: Text('MoMA', 'en') }"))});
}

TEST(EvalRecord, EmptyFieldsOmittedAndAllEmptyOutputsNothing) {
    EXPECT_EQ(values("Id('/z/ghost').{ id: ?cur name: /name }"), Strings{render_literal(parse_literal("{ id: Id('/z/ghost') }"))});
    EXPECT_TRUE(values("Id('/z/ghost').{ name: /name }").empty());
}

TEST(EvalRecord, Merge) {
    EXPECT_EQ(values("Id('/z/moma').{ @merge: { open: true } }"), Strings{render_literal(parse_literal("{ open: true }"))});
    EXPECT_EQ(eval_message("Id('/z/moma').{ @merge: 5 }").rfind("@merge value must be a Record", 0), 0u);
}

TEST(EvalFieldAccess, Chase) {
    EXPECT_EQ(values("{ f: 5 }->f"), Strings{"5"});
    EXPECT_TRUE(values("5->f").empty());
    EXPECT_EQ(values("{ a: ({ b: 1 }, { b: 2 }) }->a->b"), (Strings{"1", "2"}));
}

// -- variables ----------------------------------------------------------

TEST(EvalVariables, BindAndRecall) {
    EXPECT_EQ(values("Id('/z/moma')./exhibit.bind(?e)./price.?e"), Strings{"Id('/z/e1')"});
    EXPECT_TRUE(values("Id('/z/moma').?nope").empty());
    EXPECT_TRUE(values("?nope").empty());
}

TEST(EvalVariables, FunctionsSeeOnlyParameters) {
    EXPECT_TRUE(values("def F() { ?e }\nId('/z/moma')./exhibit.bind(?e).F()").empty());
    EXPECT_EQ(values("def F(?x) { ?x }\nId('/z/moma')./exhibit.bind(?e).F(?e)"), Strings{"Id('/z/e1')"});
    EXPECT_EQ(values("def F($xs) { Count($xs) }\nId('/z/moma').F(/name)"), Strings{"2"});
}

// -- calls and recursion ------------------------------------------------

TEST(EvalCall, NavigationReachesTheClass) {
    QueryResult r = run_fixture_query("navigation.pq", g2());
    EXPECT_EQ(multiset(r), Strings{"Id('/z/cat') -> Id('/z/mammalia')"});
}

TEST(EvalCall, BoundedSelfLoopTerminatesEmpty) {
    auto start = std::chrono::steady_clock::now();
    QueryResult r = run_fixture_query("navigation_recur2.pq", fixture_graph("selfloop.pqt"));
    auto elapsed = std::chrono::steady_clock::now() - start;
    EXPECT_EQ(r.total(), 0u);
    EXPECT_LT(elapsed, std::chrono::seconds(1));
}

TEST(EvalCall, BoundUsesBaseAtTheLimit) {
    // Calls 1 and 2 use recur; call 3, the last allowed, uses base.
    std::string src =
        "def base D() { 'base' }\n"
        "def recur<3> D() { ('recur', /next.D()) }\n"
        "Id('/a').D()";
    Graph g = load_graph("/a\t/next\t/b\n/b\t/next\t/c\n/c\t/next\t/d\n/d\t/next\t/e\n");
    EXPECT_EQ(values(src, g), (Strings{"'base'", "'recur'", "'recur'"}));
}

TEST(EvalCall, BoundedNestedRecord) {
    QueryResult r = run_fixture_query("bounded.pq", g2());
    ASSERT_EQ(r.total(), 1u);
    EXPECT_TRUE(equals(r.pairs[0].root, Value::id("/z/cat")));
    Value expected = parse_literal(
        "{ name: Text('Cat', 'en') rank: Text('Species', 'en') under: {"
        "  name: Text('Felidae', 'en') rank: Text('Family', 'en') under: {"
        "    name: Text('Carnivora', 'en') rank: Text('Order', 'en') under: {"
        "      name: Text('Mammalia', 'en') rank: Text('Class', 'en') } } } }");
    EXPECT_TRUE(equals(r.pairs[0].value, expected)) << render_literal(r.pairs[0].value);
    // Depth of the `under` chain equals the number of taxonomy levels.
    int depth = 1;
    Value cur = r.pairs[0].value;
    while (const auto* under = cur.as_record().find("under")) {
        cur = (*under)[0];
        ++depth;
    }
    EXPECT_EQ(depth, 4);
}

TEST(EvalCall, ExternalsCalledOncePerInput) {
    int calls = 0;
    ExternalRegistry reg;
    reg.register_external("Echo", [&](std::span<const std::vector<Value>> args) {
        ++calls;
        return args[0];
    });
    std::string src = "external def E(?x) implemented_by 'Echo'\n(1, 2, 3).E((?cur, ?cur))";
    EvalOptions o;
    o.externals = &reg;
    EXPECT_EQ(values(src, g1(), o, &reg), (Strings{"1", "1", "2", "2", "3", "3"}));
    EXPECT_EQ(calls, 3);
}

TEST(EvalCall, UnregisteredExternalFailsAtEvaluation) {
    EXPECT_EQ(eval_message("external def M(?x) implemented_by 'Missing'\nM(1)").rfind("external function 'M' is not registered", 0),
              0u);
}

// -- golden pipelines ---------------------------------------------------

TEST(Golden, AttractionsV2) {
    QueryResult r = run_fixture_query("attractions_v2.pq", g1());
    EXPECT_EQ(multiset(r), (Strings{
                               "Id('/z/fun') -> " + render_literal(parse_literal("{ id: Id('/z/fun') name: Text('FunPark', 'en') }")),
                               "Id('/z/moma') -> " + render_literal(parse_literal("{ id: Id('/z/moma') name: Text('MoMA', 'en') }")),
                           }));
}

TEST(Golden, AttractionsV3AgainstOracle) {
    Graph g = fixture_graph("g1_extended.pqt");
    ExternalRegistry reg = fixture_registry();
    EvalOptions o;
    o.params = params_v3();
    o.externals = &reg;
    QueryResult r = run_fixture_query("attractions_v3.pq", g, o, &reg);

    const Record& params = o.params->as_record();
    auto limit = static_cast<std::size_t>((*params.find("max_num_results"))[0].as_int());
    auto expected = oracle_v3(g, (*params.find("day_of_week"))[0].as_string(), (*params.find("radius_km"))[0].as_number(), limit);
    ASSERT_EQ(r.total(), expected.size());
    ASSERT_EQ(expected.size(), 2u);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& [root, value] = r.pairs[i];
        EXPECT_EQ(root.as_id(), expected[i].id);
        const Record& rec = value.as_record();
        EXPECT_EQ((*rec.find("id"))[0].as_id(), expected[i].id);
        EXPECT_EQ((*rec.find("name"))[0].as_text().text, expected[i].english_name);
        EXPECT_EQ((*rec.find("distance"))[0].as_number(), expected[i].distance);
        EXPECT_EQ((*rec.find("mean_price"))[0].as_number(), expected[i].mean_price);
        EXPECT_NE(rec.find("open_hours"), nullptr);
    }
    EXPECT_EQ(expected[0].mean_price, 27.5);
}

TEST(Golden, ComplexPatterns) {
    QueryResult r = run_fixture_query("complex_patterns.pq", g1());
    EXPECT_EQ(multiset(r), Strings{"Id('/z/moma') -> Id('/z/e1')"});
}

}  // namespace
