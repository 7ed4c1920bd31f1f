#include <gtest/gtest.h>

#include <algorithm>

#include "pathquery/error.hpp"
#include "test_support.hpp"

using namespace pqtest;

namespace {

std::vector<std::string> rendered(std::span<const Value> vs) {
    std::vector<std::string> out;
    for (const auto& v : vs) out.push_back(render_literal(v));
    return out;
}

// Parses the G1 file by hand (split on TAB) to get an index-free triple list.
std::vector<std::array<std::string, 3>> g1_lines() {
    std::vector<std::array<std::string, 3>> out;
    std::istringstream in(read_file(fixture("g1.pqt")));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto a = line.find('\t');
        auto b = line.find('\t', a + 1);
        out.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1), line.substr(b + 1)});
    }
    return out;
}

TEST(GraphLoad, IdShorthandAndLiterals) {
    Graph g = load_graph("/z/moma\t/type\t/museum\n/z/moma\t/name\tText('MoMA', 'en')\n");
    ASSERT_EQ(g.size(), 2u);
    EXPECT_TRUE(equals(g.triples()[0].subject, Value::id("/z/moma")));
    EXPECT_EQ(g.triples()[0].predicate, "/type");
    EXPECT_TRUE(equals(g.triples()[0].object, Value::id("/museum")));
    EXPECT_TRUE(equals(g.triples()[1].object, Value::text("MoMA", "en")));
}

TEST(GraphLoad, RecordObjectRejected) {
    try {
        load_graph("/z/x\t/f\t{ f: 5 }\n");
        FAIL() << "expected an error";
    } catch (const GraphError& e) {
        EXPECT_EQ(e.message(), "Record object not allowed");
        EXPECT_EQ(e.loc().line, 1u);
    }
}

TEST(GraphLoad, MalformedLinesReportLineNumbers) {
    try {
        load_graph("# header\n/a\t/p\t/b\n/a /p /b\n");
        FAIL() << "expected an error";
    } catch (const GraphError& e) {
        EXPECT_EQ(e.loc().line, 3u);
    }
    EXPECT_THROW(load_graph("/a\tp\t/b\n"), GraphError);
    EXPECT_THROW(load_graph("/a\t/p\tText('x'\n"), GraphError);
}

TEST(GraphLoad, DuplicatesCollapseCommentsAndBlanksIgnored) {
    Graph g = load_graph("# c\n\n/a\t/p\t1\n/a\t/p\t1\n   \n/a\t/p\t2\n");
    EXPECT_EQ(g.size(), 2u);
    EXPECT_EQ(g.out_edges(Value::id("/a"), "/p").size(), 2u);
}

TEST(GraphLoad, G1HasElevenTriples) { EXPECT_EQ(fixture_graph("g1.pqt").size(), 11u); }

TEST(GraphEdges, OutEdges) {
    Graph g = fixture_graph("g1.pqt");
    // Oracle: direct scan of the G1 lines.
    std::vector<std::string> expected;
    for (const auto& l : g1_lines()) {
        if (l[0] == "/z/moma" && l[1] == "/name") expected.push_back(render_literal(parse_node(l[2])));
    }
    EXPECT_EQ(rendered(g.out_edges(Value::id("/z/moma"), "/name")), expected);
    EXPECT_EQ(expected, (std::vector<std::string>{"Text('MoMA', 'en')", "Text('MoMA', 'es')"}));
    EXPECT_TRUE(g.out_edges(Value::id("/z/moma"), "/ride").empty());
    EXPECT_TRUE(g.out_edges(Value::text("MoMA", "en"), "/name").empty());
}

TEST(GraphEdges, InEdges) {
    Graph g = fixture_graph("g1.pqt");
    std::vector<std::string> museum_types;
    for (const auto& l : g1_lines()) {
        if (l[1] == "/type" && l[2] == "/museum") museum_types.push_back(render_literal(parse_node(l[0])));
    }
    EXPECT_EQ(rendered(g.in_edges(Value::id("/museum"), "/type")), museum_types);
    EXPECT_EQ(rendered(g.in_edges(Value::id("/z/e1"), "/exhibit")), std::vector<std::string>{"Id('/z/moma')"});
    EXPECT_TRUE(g.in_edges(Value::integer(25), "/name").empty());
}

TEST(GraphEntities, SubjectsUnionIdObjects) {
    Graph g = fixture_graph("g1.pqt");
    std::vector<std::string> expected;
    auto add = [&](const std::string& token) {
        Value v = parse_node(token);
        if (std::find(expected.begin(), expected.end(), render_literal(v)) == expected.end()) {
            expected.push_back(render_literal(v));
        }
    };
    for (const auto& l : g1_lines()) {
        add(l[0]);
        if (parse_node(l[2]).is(Type::Id)) add(l[2]);
    }
    EXPECT_EQ(rendered(g.all_entities()), expected);
    EXPECT_EQ(expected.size(), 7u);
}

TEST(GraphEntities, EmptyAndLiteralObject) {
    EXPECT_TRUE(load_graph("").all_entities().empty());
    Graph g = load_graph("/a\t/p\t5\n");
    EXPECT_EQ(rendered(g.all_entities()), std::vector<std::string>{"Id('/a')"});
}

TEST(GraphRoundTrip, RenderThenLoad) {
    for (const char* name : {"g1.pqt", "g1_extended.pqt", "g2.pqt"}) {
        Graph g = fixture_graph(name);
        Graph h = load_graph(render_graph(g));
        EXPECT_EQ(render_graph(h), render_graph(g)) << name;
    }
}

TEST(GraphIndex, SoundAndCompleteOnRandomGraphs) {
    Rng rng(seed_for("graph-index"));
    for (int round = 0; round < 300; ++round) {
        auto triples = random_triples(rng, 30);
        Graph g = Graph::from_triples(triples);
        for (const auto& t : g.triples()) {
            auto out = g.out_edges(t.subject, t.predicate);
            auto in = g.in_edges(t.object, t.predicate);
            EXPECT_TRUE(std::any_of(out.begin(), out.end(), [&](const Value& v) { return equals(v, t.object); }));
            EXPECT_TRUE(std::any_of(in.begin(), in.end(), [&](const Value& v) { return equals(v, t.subject); }));
        }
        // Completeness: every indexed edge is a triple.
        std::size_t indexed = 0;
        for (const auto& e : g.all_entities()) {
            for (const char* p : {"/p", "/q", "/r"}) indexed += g.out_edges(e, p).size();
        }
        std::size_t from_subjects = 0;
        for (const auto& t : g.triples()) from_subjects += 1;
        EXPECT_EQ(indexed, from_subjects);
        Graph h = load_graph(render_graph(g));
        EXPECT_EQ(render_graph(h), render_graph(g));
    }
}

TEST(GraphFile, MissingFileIsAnError) { EXPECT_THROW(load_graph_file("/nonexistent/graph.pqt"), Error); }

}  // namespace
