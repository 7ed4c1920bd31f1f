#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathquery/value.hpp"

namespace pathquery {

// Host implementation of an `external def`. Receives one collection per
// declared parameter, in declaration order, and returns the output values.
// Must be safe to call concurrently and must not touch the graph.
using HostFunction = std::function<std::vector<Value>(std::span<const std::vector<Value>> args)>;

// Keyed by the `implemented_by` string, not the name visible to queries.
class ExternalRegistry {
public:
    // Throws std::invalid_argument when `name` is already registered.
    void register_external(std::string name, HostFunction fn);
    const HostFunction* lookup_external(std::string_view name) const;
    std::size_t size() const { return fns_.size(); }

private:
    std::map<std::string, HostFunction, std::less<>> fns_;
};

// A host function backed by a lookup table. Each row holds one value per
// parameter followed by the output value; a call emits the output of every
// row whose arguments match some combination of the argument collections.
HostFunction table_function(std::vector<std::vector<Value>> rows, std::size_t arity);

// Table file: TAB-separated node tokens per line (see parse_node), `#`
// comments. All rows must have the same width. Throws GraphError / Error.
HostFunction load_table_function(const std::filesystem::path& path, std::size_t* arity = nullptr);

// TextLang(): the language tag of a Text value as a String.
std::optional<Value> builtin_text_lang(const Value& v);

// Built-in functions callable without an import.
struct BuiltinSpec {
    std::string_view name;
    std::size_t arity;
};
const BuiltinSpec* find_global_builtin(std::string_view name);

// Standard modules importable by bare name (`import 'geo'`). Apart from
// TextLang their functions are declared but raise "not implemented".
bool is_builtin_module(std::string_view import_path);
const BuiltinSpec* find_module_builtin(std::string_view module, std::string_view name);

}  // namespace pathquery
