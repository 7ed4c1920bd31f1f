#include "pathquery/graph.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pathquery/error.hpp"
#include "pathquery/parser.hpp"

namespace pathquery {

namespace {

struct TripleLess {
    bool operator()(const Triple& a, const Triple& b) const {
        if (auto c = compare(a.subject, b.subject); c != 0) return c < 0;
        if (int c = a.predicate.compare(b.predicate); c != 0) return c < 0;
        return compare(a.object, b.object) < 0;
    }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool valid_predicate(std::string_view p) {
    if (p.size() < 2 || p[0] != '/') return false;
    for (char c : p) {
        if (c == ' ' || c == '\t' || c == '\n') return false;
    }
    return true;
}

}  // namespace

Graph Graph::from_triples(std::span<const Triple> triples) {
    Graph g;
    std::set<Triple, TripleLess> seen;
    std::set<Value, ValueLess> entity_seen;
    auto note_entity = [&](const Value& v) {
        if (entity_seen.insert(v).second) g.entities_.push_back(v);
    };
    for (const auto& t : triples) {
        if (t.subject.is_record()) throw std::invalid_argument("Record subject not allowed");
        if (t.object.is_record()) throw std::invalid_argument("Record object not allowed");
        if (!valid_predicate(t.predicate)) throw std::invalid_argument("malformed predicate '" + t.predicate + "'");
        if (!seen.insert(t).second) continue;
        g.triples_.push_back(t);
        g.spo_[t.subject][t.predicate].push_back(t.object);
        g.ops_[t.object][t.predicate].push_back(t.subject);
        note_entity(t.subject);
        if (t.object.is(Type::Id)) note_entity(t.object);
    }
    return g;
}

std::span<const Value> Graph::lookup(const Index& index, const Value& node, std::string_view predicate) {
    if (node.is_record()) return {};
    auto it = index.find(node);
    if (it == index.end()) return {};
    auto e = it->second.find(predicate);
    if (e == it->second.end()) return {};
    return e->second;
}

std::span<const Value> Graph::out_edges(const Value& node, std::string_view predicate) const {
    return lookup(spo_, node, predicate);
}

std::span<const Value> Graph::in_edges(const Value& node, std::string_view predicate) const {
    return lookup(ops_, node, predicate);
}

Value parse_node(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token[0] == '/') return Value::id(std::string(token));
    return parse_literal(token);
}

std::string render_node(const Value& v) {
    if (v.is(Type::Id)) {
        const auto& s = v.as_id();
        bool plain = s.size() > 1 && s[0] == '/';
        for (char c : s) {
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') plain = false;
        }
        if (plain) return s;
    }
    return render_literal(v);
}

Graph load_graph(std::string_view source) {
    std::vector<Triple> triples;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        std::string_view line = source.substr(start, end - start);
        start = end + 1;
        ++line_no;
        std::string_view content = trim(line);
        while (!content.empty() && content.front() == '\t') content = trim(content.substr(1));
        if (content.empty() || content.front() == '#') {
            if (end == source.size()) break;
            continue;
        }
        std::vector<std::string_view> cols;
        std::size_t cs = 0;
        for (;;) {
            std::size_t tab = line.find('\t', cs);
            cols.push_back(trim(line.substr(cs, tab == std::string_view::npos ? std::string_view::npos : tab - cs)));
            if (tab == std::string_view::npos) break;
            cs = tab + 1;
        }
        if (cols.size() != 3) {
            throw GraphError("expected 3 TAB-separated columns, found " + std::to_string(cols.size()), line_no);
        }
        Triple t;
        try {
            t.subject = parse_node(cols[0]);
            t.object = parse_node(cols[2]);
        } catch (const Error& e) {
            throw GraphError("malformed literal: " + e.message(), line_no);
        }
        t.predicate = std::string(cols[1]);
        if (t.subject.is_record()) throw GraphError("Record subject not allowed", line_no);
        if (t.object.is_record()) throw GraphError("Record object not allowed", line_no);
        if (!valid_predicate(t.predicate)) throw GraphError("malformed predicate '" + t.predicate + "'", line_no);
        triples.push_back(std::move(t));
        if (end == source.size()) break;
    }
    return Graph::from_triples(triples);
}

Graph load_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Usage, "cannot read graph file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return load_graph(ss.str());
    } catch (const GraphError& e) {
        throw Error(ErrorKind::Graph, e.message(), e.loc(), path.string());
    }
}

std::string render_graph(const Graph& g) {
    std::string out;
    for (const auto& t : g.triples()) {
        out += render_node(t.subject) + "\t" + t.predicate + "\t" + render_node(t.object) + "\n";
    }
    return out;
}

}  // namespace pathquery
