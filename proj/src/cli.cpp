#include "pathquery/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pathquery/error.hpp"
#include "pathquery/graph.hpp"
#include "pathquery/parser.hpp"
#include "pathquery/program.hpp"

namespace pathquery {

namespace {

std::string read_text(const std::string& path, std::string_view what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Usage, "cannot read " + std::string(what) + " file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json typed(const Value& v) {
    return nlohmann::json{{"type", std::string(type_name(v.type()))}, {"literal", render_literal(v)}};
}

struct Session {
    Graph graph;
    ModuleLoader loader;
    ExternalRegistry registry;
    EvalOptions options;
};

void register_tables(ExternalRegistry& registry, const std::vector<std::string>& specs) {
    for (const auto& spec : specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw Error(ErrorKind::Usage, "--external expects NAME=TABLE, got '" + spec + "'");
        }
        try {
            registry.register_external(spec.substr(0, eq), load_table_function(spec.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw Error(ErrorKind::Usage, e.what());
        }
    }
}

std::vector<std::filesystem::path> to_paths(const std::vector<std::string>& dirs) {
    return {dirs.begin(), dirs.end()};
}

QueryResult run_text(Session& s, const std::string& source, const std::string& file) {
    Program program = link_query(source, file, s.loader, &s.registry);
    return eval_query(program, s.graph, s.options);
}

// Reads lines up to a blank line or end of input. A first line starting
// with ':' is a command and forms a block on its own. Returns false at end
// of input with nothing read.
bool read_block(std::istream& in, std::string& block) {
    block.clear();
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) {
            if (any) return true;
            continue;
        }
        block += line;
        block += '\n';
        if (!any && line[line.find_first_not_of(" \t")] == ':') return true;
        any = true;
    }
    return any;
}

int repl(Session& s, CliStreams io) {
    io.out << "PathQuery REPL over " << s.graph.size() << " triples. Enter a query followed by a blank line; "
           << ":params {...} sets ?params, :quit exits.\n";
    std::string block;
    for (;;) {
        if (io.interactive) io.out << "pq> " << std::flush;
        if (!read_block(io.in, block)) return 0;
        std::string_view text = block;
        text.remove_prefix(text.find_first_not_of(" \t\n"));
        try {
            if (text.starts_with(":quit") || text.starts_with(":q\n")) return 0;
            if (text.starts_with(":params")) {
                Value p = parse_literal(text.substr(7));
                if (!p.is_record()) throw Error(ErrorKind::Usage, ":params expects a record literal");
                s.options.params = std::move(p);
                io.out << "?params set\n";
                continue;
            }
            if (text.starts_with(":")) throw Error(ErrorKind::Usage, "unknown command; use :params {...} or :quit");
            io.out << format_text(run_text(s, block, "<repl>"));
        } catch (const std::exception& e) {
            io.err << "error: " << e.what() << "\n";
        }
    }
}

}  // namespace

std::string format_text(const QueryResult& result, std::size_t limit) {
    std::string out;
    std::size_t n = 0;
    for (const auto& p : canonical_order(result.pairs)) {
        if (n++ == limit) break;
        out += render_literal(p.root) + ": " + render_literal(p.value) + "\n";
    }
    out += "(total results: " + std::to_string(result.total()) + ")\n";
    return out;
}

std::string format_json(const QueryResult& result, std::size_t limit) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : result.pairs) {
        if (arr.size() == limit) break;
        arr.push_back({{"root", typed(p.root)}, {"value", typed(p.value)}});
    }
    return arr.dump(2) + "\n";
}

std::vector<Value> load_roots_file(const std::string& path) {
    std::istringstream in(read_text(path, "roots"));
    std::vector<Value> roots;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            Value v = parse_node(line);
            if (v.is_record()) throw Error(ErrorKind::Usage, "a root cannot be a Record");
            roots.push_back(std::move(v));
        } catch (const Error& e) {
            throw Error(ErrorKind::Usage, e.message(), SourceLoc{line_no, 1}, path);
        }
    }
    return roots;
}

Value load_params_file(const std::string& path) {
    Value v;
    try {
        v = parse_literal(read_text(path, "params"));
    } catch (const SyntaxError& e) {
        throw SyntaxError(e.message(), e.loc(), path);
    }
    if (!v.is_record()) throw Error(ErrorKind::Usage, "params file must contain a record literal", {}, path);
    return v;
}

int run_cli(const std::vector<std::string>& args, CliStreams io) {
    CLI::App app{"PathQuery: query an edge-labelled graph", "pathquery"};
    app.require_subcommand(1);

    std::string graph_path;
    std::string query_path;
    std::string inline_query;
    std::string params_path;
    std::string roots_path;
    std::vector<std::string> module_paths;
    std::vector<std::string> externals;
    std::string format = "text";
    std::size_t limit = SIZE_MAX;
    bool as_module = false;
    bool render = false;

    CLI::App* run = app.add_subcommand("run", "Evaluate a query and print the root -> value mapping");
    run->add_option("--graph", graph_path, "Triple file (TAB-separated)")->required();
    auto* q = run->add_option("--query", query_path, "Query file");
    auto* e = run->add_option("-e,--expr", inline_query, "Inline query text");
    q->excludes(e);
    e->excludes(q);
    run->add_option("--params", params_path, "File holding the ?params record literal");
    run->add_option("--roots", roots_path, "File listing the @roots values, one per line");
    run->add_option("--module-path", module_paths, "Directory searched for imported modules");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    run->add_option("--limit", limit, "List at most N results");
    run->add_option("--external", externals, "NAME=TABLE: back external NAME with a lookup table file");

    CLI::App* parse = app.add_subcommand("parse", "Parse a query or module and print its syntax tree");
    auto* pq = parse->add_option("--query", query_path, "Query or module file");
    auto* pe = parse->add_option("-e,--expr", inline_query, "Inline query text");
    pq->excludes(pe);
    pe->excludes(pq);
    parse->add_flag("--module", as_module, "Parse as a module (definitions only)");
    parse->add_flag("--render", render, "Print normalized source instead of the tree");

    CLI::App* repl_cmd = app.add_subcommand("repl", "Interactive query session over one graph");
    repl_cmd->add_option("--graph", graph_path, "Triple file (TAB-separated)")->required();
    repl_cmd->add_option("--module-path", module_paths, "Directory searched for imported modules");
    repl_cmd->add_option("--params", params_path, "File holding the initial ?params record literal");
    repl_cmd->add_option("--external", externals, "NAME=TABLE: back external NAME with a lookup table file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err, io.out, io.err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (parse->parsed()) {
            if (query_path.empty() && inline_query.empty()) throw Error(ErrorKind::Usage, "parse needs --query or -e");
            std::string file = query_path.empty() ? "<inline>" : query_path;
            std::string text = query_path.empty() ? inline_query : read_text(query_path, "query");
            if (as_module) {
                Module m = parse_module(text, file);
                io.out << (render ? render_module(m) : dump_module(m));
            } else {
                Query qy = parse_query(text, file);
                io.out << (render ? render_query(qy) : dump_query(qy));
            }
            return 0;
        }

        Session s;
        s.graph = load_graph_file(graph_path);
        s.loader = file_loader(to_paths(module_paths));
        register_tables(s.registry, externals);
        if (!params_path.empty()) s.options.params = load_params_file(params_path);
        s.options.externals = &s.registry;

        if (repl_cmd->parsed()) return repl(s, io);

        if (query_path.empty() && inline_query.empty()) throw Error(ErrorKind::Usage, "run needs --query or -e");
        if (!roots_path.empty()) s.options.roots = load_roots_file(roots_path);
        QueryResult result = query_path.empty() ? run_text(s, inline_query, "<inline>")
                                                : run_text(s, read_text(query_path, "query"), query_path);
        io.out << (format == "json" ? format_json(result, limit) : format_text(result, limit));
        return 0;
    } catch (const Error& err) {
        io.err << "error: " << err.what() << "\n";
    } catch (const std::exception& err) {
        io.err << "error: " << err.what() << "\n";
    }
    return 1;
}

}  // namespace pathquery
