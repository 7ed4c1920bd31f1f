#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pathquery/ast.hpp"
#include "pathquery/stdlib.hpp"

namespace pathquery {

// What a Call resolved to. Owned by the Program; referenced from
// ast::Call::target.
struct Callable {
    enum class Kind {
        Function,  // plain PathQuery function
        Bounded,   // base + recur<N> pair
        External,  // external def, backed by a host function
        TextLang,  // built-in TextLang()
        Stub,      // declared built-in without an implementation
    };

    Kind kind = Kind::Function;
    std::string qualified_name;  // "F" or "ns::F", for diagnostics
    std::vector<ast::Param> params;

    const ast::FuncDef* plain = nullptr;
    const ast::FuncDef* base = nullptr;
    const ast::FuncDef* recur = nullptr;
    int bound = 0;

    const ast::ExternalDef* external = nullptr;
    const HostFunction* host = nullptr;  // null if no registry was supplied

    std::size_t index = 0;  // position in Program::callables()
};

struct SourceFile {
    std::string path;  // display / identity path
    std::string text;
};

// Maps an import string, seen in `importing_file`, to module source.
// Returns nullopt when the module does not exist.
using ModuleLoader = std::function<std::optional<SourceFile>(const std::string& import_path, const std::string& importing_file)>;

// Looks next to the importing file first, then in each search directory.
ModuleLoader file_loader(std::vector<std::filesystem::path> search_paths);

// Serves modules from memory, keyed by import string.
ModuleLoader memory_loader(std::vector<SourceFile> modules);

// A linked query: parsed query file, every transitively imported module, and
// the resolved function table. Move-only; calls point into its storage.
class Program {
public:
    Program(Program&&) noexcept = default;
    Program& operator=(Program&&) noexcept = default;
    Program(const Program&) = delete;
    Program& operator=(const Program&) = delete;

    const Query& query() const { return *query_; }
    const Expr& root() const { return *query_->root; }
    const std::deque<Callable>& callables() const { return callables_; }
    std::size_t module_count() const { return modules_.size(); }

private:
    Program() = default;
    friend class Linker;

    std::unique_ptr<Query> query_;
    std::vector<std::unique_ptr<Module>> modules_;
    std::deque<Callable> callables_;
};

// Loads imports, resolves every call, and validates function definitions.
// With a registry, calls to externals whose implementation is not
// registered are rejected. Throws LinkError (or SyntaxError from modules).
Program resolve_imports(Query query, const ModuleLoader& loader, const ExternalRegistry* registry = nullptr);

// parse_query + resolve_imports.
Program link_query(std::string_view source, const std::string& file, const ModuleLoader& loader,
                   const ExternalRegistry* registry = nullptr);

}  // namespace pathquery
