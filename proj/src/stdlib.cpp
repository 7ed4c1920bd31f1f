#include "pathquery/stdlib.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pathquery/error.hpp"
#include "pathquery/graph.hpp"

namespace pathquery {

void ExternalRegistry::register_external(std::string name, HostFunction fn) {
    if (!fn) throw std::invalid_argument("external function '" + name + "' has no implementation");
    if (fns_.contains(name)) throw std::invalid_argument("external function '" + name + "' is already registered");
    fns_.emplace(std::move(name), std::move(fn));
}

const HostFunction* ExternalRegistry::lookup_external(std::string_view name) const {
    auto it = fns_.find(name);
    return it == fns_.end() ? nullptr : &it->second;
}

HostFunction table_function(std::vector<std::vector<Value>> rows, std::size_t arity) {
    for (const auto& r : rows) {
        if (r.size() != arity + 1) throw std::invalid_argument("table row width does not match arity");
    }
    return [rows = std::move(rows), arity](std::span<const std::vector<Value>> args) {
        std::vector<Value> out;
        if (args.size() != arity) return out;
        for (const auto& row : rows) {
            bool match = true;
            for (std::size_t i = 0; i < arity && match; ++i) {
                bool any = false;
                for (const auto& a : args[i]) {
                    if (equals(a, row[i])) {
                        any = true;
                        break;
                    }
                }
                match = any;
            }
            if (match) out.push_back(row[arity]);
        }
        return out;
    };
}

HostFunction load_table_function(const std::filesystem::path& path, std::size_t* arity_out) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Usage, "cannot read table file: " + path.string());
    std::vector<std::vector<Value>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<Value> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, '\t')) {
            try {
                row.push_back(parse_node(cell));
            } catch (const Error& e) {
                throw Error(ErrorKind::Graph, "malformed literal: " + e.message(), SourceLoc{line_no, 1}, path.string());
            }
        }
        if (row.size() < 2) throw Error(ErrorKind::Graph, "table rows need at least 2 columns", SourceLoc{line_no, 1}, path.string());
        if (width == 0) width = row.size();
        if (row.size() != width) throw Error(ErrorKind::Graph, "inconsistent table row width", SourceLoc{line_no, 1}, path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::Graph, "empty table", {}, path.string());
    if (arity_out) *arity_out = width - 1;
    return table_function(std::move(rows), width - 1);
}

std::optional<Value> builtin_text_lang(const Value& v) {
    if (!v.is(Type::Text)) return std::nullopt;
    return Value::string(v.as_text().lang);
}

namespace {

constexpr BuiltinSpec kGlobal[] = {{"TextLang", 0}};

struct ModuleSpec {
    std::string_view module;
    BuiltinSpec fn;
};

constexpr ModuleSpec kModules[] = {
    {"time", {"Now", 0}},           {"time", {"DayOfWeek", 1}},     {"time", {"InTimezone", 2}},
    {"math", {"Abs", 1}},           {"math", {"Sqrt", 1}},          {"math", {"Pow", 2}},
    {"strings", {"Lower", 1}},      {"strings", {"Upper", 1}},      {"strings", {"Contains", 2}},
    {"urls", {"Host", 1}},          {"regex", {"Matches", 2}},      {"geo", {"AreaIntersects", 2}},
    {"geo", {"Distance", 2}},       {"text", {"TextLang", 0}},
};

}  // namespace

const BuiltinSpec* find_global_builtin(std::string_view name) {
    for (const auto& b : kGlobal) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

bool is_builtin_module(std::string_view import_path) {
    for (const auto& m : kModules) {
        if (m.module == import_path) return true;
    }
    return false;
}

const BuiltinSpec* find_module_builtin(std::string_view module, std::string_view name) {
    for (const auto& m : kModules) {
        if (m.module == module && m.fn.name == name) return &m.fn;
    }
    return nullptr;
}

}  // namespace pathquery
