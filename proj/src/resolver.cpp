#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pathquery/error.hpp"
#include "pathquery/parser.hpp"
#include "pathquery/program.hpp"

namespace pathquery {

namespace {

std::optional<std::string> read_file(const std::filesystem::path& p) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) return std::nullopt;
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string identity_of(const std::string& path) {
    std::error_code ec;
    if (path.empty() || !std::filesystem::exists(path, ec)) return path;
    auto canon = std::filesystem::weakly_canonical(path, ec);
    return ec ? path : canon.string();
}

}  // namespace

ModuleLoader file_loader(std::vector<std::filesystem::path> search_paths) {
    return [search_paths = std::move(search_paths)](const std::string& import_path,
                                                    const std::string& importing_file) -> std::optional<SourceFile> {
        std::vector<std::filesystem::path> candidates;
        std::filesystem::path imp(import_path);
        if (imp.is_absolute()) {
            candidates.push_back(imp);
        } else {
            if (!importing_file.empty()) candidates.push_back(std::filesystem::path(importing_file).parent_path() / imp);
            for (const auto& dir : search_paths) candidates.push_back(dir / imp);
        }
        for (const auto& c : candidates) {
            if (auto text = read_file(c)) return SourceFile{c.lexically_normal().string(), std::move(*text)};
        }
        return std::nullopt;
    };
}

ModuleLoader memory_loader(std::vector<SourceFile> modules) {
    std::map<std::string, std::string> table;
    for (auto& m : modules) table[m.path] = std::move(m.text);
    return [table = std::move(table)](const std::string& import_path, const std::string&) -> std::optional<SourceFile> {
        auto it = table.find(import_path);
        if (it == table.end()) return std::nullopt;
        return SourceFile{it->first, it->second};
    };
}

class Linker {
public:
    Linker(const ModuleLoader& loader, const ExternalRegistry* registry) : loader_(loader), registry_(registry) {}

    Program link(Query query) {
        Program program;
        program_ = &program;
        program.query_ = std::make_unique<Query>(std::move(query));
        Query& q = *program.query_;

        FileScope& entry = new_file(q.path, identity_of(q.path));
        std::vector<std::string> stack{entry.identity};
        load_imports(entry, q.imports, stack);
        entry.top = declare(q.defs, nullptr, entry);

        for (auto& [file, defs] : pending_) resolve_defs(*defs, file->top, *file);
        resolve_defs(q.defs, entry.top, entry);
        resolve(*q.root, entry.top, entry, nullptr);
        check_plain_cycles();
        return program;
    }

private:
    struct Scope;

    struct Group {
        ast::FuncDef* plain = nullptr;
        ast::FuncDef* base = nullptr;
        ast::FuncDef* recur = nullptr;
        ast::ExternalDef* external = nullptr;
        Callable* callable = nullptr;
    };

    struct Scope {
        const Scope* parent = nullptr;
        std::map<std::string, Group, std::less<>> groups;
    };

    struct FileScope;

    struct Namespace {
        const FileScope* module = nullptr;  // null for a built-in module
        std::string builtin;
    };

    struct FileScope {
        std::string path;
        std::string identity;
        std::map<std::string, Namespace, std::less<>> namespaces;
        const Scope* top = nullptr;
    };

    FileScope& new_file(std::string path, std::string identity) {
        auto& f = files_.emplace_back(std::make_unique<FileScope>());
        f->path = std::move(path);
        f->identity = std::move(identity);
        return *f;
    }

    [[noreturn]] static void fail(const std::string& msg, SourceLoc loc, const std::string& file) {
        throw LinkError(msg, loc, file);
    }

    // -- imports ------------------------------------------------------------

    void load_imports(FileScope& file, const std::vector<Import>& imports, std::vector<std::string>& stack) {
        for (const auto& imp : imports) {
            std::string ns = imp.namespace_name();
            if (file.namespaces.contains(ns)) {
                fail("namespace collision: '" + ns + "' is imported twice", imp.loc, file.path);
            }
            if (is_builtin_module(imp.path)) {
                file.namespaces[ns] = Namespace{nullptr, imp.path};
                continue;
            }
            std::optional<SourceFile> src = loader_(imp.path, file.path);
            if (!src) fail("module not found: " + imp.path, imp.loc, file.path);
            std::string id = identity_of(src->path);
            for (std::size_t i = 0; i < stack.size(); ++i) {
                if (stack[i] != id) continue;
                std::string chain;
                for (std::size_t j = i; j < stack.size(); ++j) chain += stack[j] + " -> ";
                fail("import cycle: " + chain + id, imp.loc, file.path);
            }
            if (auto it = loaded_.find(id); it != loaded_.end()) {
                file.namespaces[ns] = Namespace{it->second, {}};
                continue;
            }
            Module* module =
                program_->modules_.emplace_back(std::make_unique<Module>(parse_module(src->text, src->path))).get();
            FileScope& mf = new_file(src->path, id);
            loaded_[id] = &mf;
            stack.push_back(id);
            load_imports(mf, module->imports, stack);
            stack.pop_back();
            mf.top = declare(module->defs, nullptr, mf);
            pending_.emplace_back(&mf, &module->defs);
            file.namespaces[ns] = Namespace{&mf, {}};
        }
    }

    // -- declarations -----------------------------------------------------------

    const Scope* declare(std::vector<ast::Def>& defs, const Scope* parent, const FileScope& file) {
        auto& scope = scopes_.emplace_back(std::make_unique<Scope>());
        scope->parent = parent;
        for (auto& d : defs) {
            if (auto* f = std::get_if<ast::FuncDef>(&d)) add_function(*scope, *f, file);
            if (auto* e = std::get_if<ast::ExternalDef>(&d)) add_external(*scope, *e, file);
        }
        finish_scope(*scope, file);
        return scope.get();
    }

    const Scope* declare_block(ast::Block& block, const Scope* parent, const FileScope& file) {
        bool any = false;
        for (auto& el : block.elements) {
            if (auto* d = std::get_if<ast::Def>(&el.item)) {
                any = any || std::holds_alternative<ast::FuncDef>(*d) || std::holds_alternative<ast::ExternalDef>(*d);
            }
        }
        if (!any) return parent;
        auto& scope = scopes_.emplace_back(std::make_unique<Scope>());
        scope->parent = parent;
        for (auto& el : block.elements) {
            auto* d = std::get_if<ast::Def>(&el.item);
            if (!d) continue;
            if (auto* f = std::get_if<ast::FuncDef>(d)) add_function(*scope, *f, file);
            if (auto* e = std::get_if<ast::ExternalDef>(d)) add_external(*scope, *e, file);
        }
        finish_scope(*scope, file);
        return scope.get();
    }

    static void add_function(Scope& scope, ast::FuncDef& f, const FileScope& file) {
        Group& g = scope.groups[f.name];
        ast::FuncDef** slot = f.kind == ast::FuncKind::Plain  ? &g.plain
                              : f.kind == ast::FuncKind::Base ? &g.base
                                                              : &g.recur;
        bool clash = *slot != nullptr || g.external != nullptr ||
                     (f.kind == ast::FuncKind::Plain && (g.base || g.recur)) ||
                     (f.kind != ast::FuncKind::Plain && g.plain);
        if (clash) fail("duplicate definition of function '" + f.name + "'", f.loc, file.path);
        *slot = &f;
    }

    static void add_external(Scope& scope, ast::ExternalDef& e, const FileScope& file) {
        Group& g = scope.groups[e.name];
        if (g.plain || g.base || g.recur || g.external) {
            fail("duplicate definition of function '" + e.name + "'", e.loc, file.path);
        }
        g.external = &e;
    }

    void finish_scope(Scope& scope, const FileScope& file) {
        for (auto& [name, g] : scope.groups) {
            Callable c;
            c.qualified_name = name;
            if (g.external) {
                c.kind = Callable::Kind::External;
                c.external = g.external;
                c.params = g.external->params;
                if (registry_) c.host = registry_->lookup_external(g.external->implemented_by);
            } else if (g.plain) {
                c.kind = Callable::Kind::Function;
                c.plain = g.plain;
                c.params = g.plain->params;
            } else {
                if (!g.base) {
                    fail("recur<" + std::to_string(g.recur->bound) + "> definition of '" + name +
                             "' has no base definition",
                         g.recur->loc, file.path);
                }
                if (!g.recur) fail("base definition of '" + name + "' has no recur<N> definition", g.base->loc, file.path);
                if (!same_params(g.base->params, g.recur->params)) {
                    fail("base and recur definitions of '" + name + "' have different parameters", g.recur->loc,
                         file.path);
                }
                c.kind = Callable::Kind::Bounded;
                c.base = g.base;
                c.recur = g.recur;
                c.bound = g.recur->bound;
                c.params = g.recur->params;
            }
            g.callable = add_callable(std::move(c));
        }
    }

    static bool same_params(const std::vector<ast::Param>& a, const std::vector<ast::Param>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].collection != b[i].collection) return false;
        }
        return true;
    }

    Callable* add_callable(Callable c) {
        c.index = program_->callables_.size();
        program_->callables_.push_back(std::move(c));
        edges_.emplace_back();
        return &program_->callables_.back();
    }

    const Callable* builtin(std::string_view module, const BuiltinSpec& spec) {
        std::string key = std::string(module) + "::" + std::string(spec.name);
        if (auto it = builtins_.find(key); it != builtins_.end()) return it->second;
        Callable c;
        c.kind = spec.name == "TextLang" ? Callable::Kind::TextLang : Callable::Kind::Stub;
        c.qualified_name = module.empty() ? std::string(spec.name) : key;
        for (std::size_t i = 0; i < spec.arity; ++i) c.params.push_back(ast::Param{"arg" + std::to_string(i), false});
        Callable* out = add_callable(std::move(c));
        builtins_[key] = out;
        return out;
    }

    // -- resolution ---------------------------------------------------------------

    void resolve_defs(std::vector<ast::Def>& defs, const Scope* scope, const FileScope& file) {
        for (auto& d : defs) resolve_def(d, scope, file, nullptr);
    }

    static const Group* find_group(const Scope* scope, std::string_view name) {
        for (const Scope* s = scope; s; s = s->parent) {
            if (auto it = s->groups.find(name); it != s->groups.end()) return &it->second;
        }
        return nullptr;
    }

    void resolve_def(ast::Def& d, const Scope* scope, const FileScope& file, const Callable* enclosing) {
        if (auto* f = std::get_if<ast::FuncDef>(&d)) {
            const Group* g = find_group(scope, f->name);
            resolve(*f->body, scope, file, g ? g->callable : nullptr);
        } else if (auto* v = std::get_if<ast::VarDef>(&d)) {
            resolve(*v->body, scope, file, enclosing);
        } else if (auto* c = std::get_if<ast::CollDef>(&d)) {
            resolve(*c->body, scope, file, enclosing);
        }
    }

    void resolve_call(ast::Call& call, SourceLoc loc, const Scope* scope, const FileScope& file,
                      const Callable* enclosing) {
        const Callable* target = nullptr;
        std::string shown = call.ns.empty() ? call.name : call.ns + "::" + call.name;
        if (call.ns.empty()) {
            if (const Group* g = find_group(scope, call.name)) {
                target = g->callable;
            } else if (const BuiltinSpec* b = find_global_builtin(call.name)) {
                target = builtin({}, *b);
            }
        } else {
            auto it = file.namespaces.find(call.ns);
            if (it == file.namespaces.end()) fail("unknown namespace '" + call.ns + "' in call to " + shown, loc, file.path);
            if (it->second.module) {
                if (auto g = it->second.module->top->groups.find(call.name); g != it->second.module->top->groups.end()) {
                    target = g->second.callable;
                }
            } else if (const BuiltinSpec* b = find_module_builtin(it->second.builtin, call.name)) {
                target = builtin(it->second.builtin, *b);
            }
        }
        if (!target) fail("unresolved function '" + shown + "'", loc, file.path);
        if (call.args.size() != target->params.size()) {
            fail("function '" + shown + "' expects " + std::to_string(target->params.size()) + " argument(s), got " +
                     std::to_string(call.args.size()),
                 loc, file.path);
        }
        if (target->kind == Callable::Kind::External && registry_ && !target->host) {
            fail("external function '" + shown + "' is not registered (implemented_by '" +
                     target->external->implemented_by + "')",
                 loc, file.path);
        }
        call.target = target;
        if (enclosing) edges_[enclosing->index].push_back({target->index, loc, file.path});
    }

    void resolve(Expr& e, const Scope* scope, const FileScope& file, const Callable* enclosing) {
        auto go = [&](ExprPtr& p) {
            if (p) resolve(*p, scope, file, enclosing);
        };
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ast::Dot>) {
                    go(n.left);
                    go(n.right);
                } else if constexpr (std::is_same_v<T, ast::Filter>) {
                    go(n.body);
                } else if constexpr (std::is_same_v<T, ast::Tuple>) {
                    for (auto& b : n.branches) go(b);
                } else if constexpr (std::is_same_v<T, ast::Block>) {
                    const Scope* inner = declare_block(n, scope, file);
                    for (auto& el : n.elements) {
                        if (auto* p = std::get_if<ExprPtr>(&el.item)) {
                            resolve(**p, inner, file, enclosing);
                        } else {
                            resolve_def(std::get<ast::Def>(el.item), inner, file, enclosing);
                        }
                    }
                } else if constexpr (std::is_same_v<T, ast::Classify>) {
                    for (auto& c : n.cases) {
                        go(c.condition);
                        go(c.body);
                    }
                    go(n.otherwise);
                } else if constexpr (std::is_same_v<T, ast::RecordCtor>) {
                    for (auto& f : n.fields) go(f.value);
                } else if constexpr (std::is_same_v<T, ast::FieldAccess>) {
                    go(n.base);
                } else if constexpr (std::is_same_v<T, ast::Compare>) {
                    go(n.left);
                    go(n.right);
                } else if constexpr (std::is_same_v<T, ast::Arith>) {
                    go(n.left);
                    go(n.right);
                } else if constexpr (std::is_same_v<T, ast::Bind>) {
                    go(n.body);
                } else if constexpr (std::is_same_v<T, ast::Call>) {
                    for (auto& a : n.args) go(a);
                    resolve_call(n, e.loc, scope, file, enclosing);
                } else if constexpr (std::is_same_v<T, ast::Aggregate>) {
                    for (auto& a : n.args) go(a);
                    for (auto& k : n.keys) go(k.path);
                }
            },
            e.node);
    }

    // Plain functions may not reach themselves through other plain
    // functions; only base/recur pairs may recurse.
    void check_plain_cycles() {
        const auto& calls = program_->callables_;
        std::vector<int> state(calls.size(), 0);
        std::function<void(std::size_t)> visit = [&](std::size_t i) {
            state[i] = 1;
            for (const auto& edge : edges_[i]) {
                if (calls[edge.target].kind != Callable::Kind::Function) continue;
                if (state[edge.target] == 1) {
                    fail("function '" + calls[edge.target].qualified_name +
                             "' is recursive; recursion requires base and recur<N> definitions",
                         edge.loc, edge.file);
                }
                if (state[edge.target] == 0) visit(edge.target);
            }
            state[i] = 2;
        };
        for (std::size_t i = 0; i < calls.size(); ++i) {
            if (calls[i].kind == Callable::Kind::Function && state[i] == 0) visit(i);
        }
    }

    struct Edge {
        std::size_t target;
        SourceLoc loc;
        std::string file;
    };

    const ModuleLoader& loader_;
    const ExternalRegistry* registry_;
    Program* program_ = nullptr;
    std::deque<std::unique_ptr<FileScope>> files_;
    std::deque<std::unique_ptr<Scope>> scopes_;
    std::map<std::string, FileScope*> loaded_;
    std::vector<std::pair<FileScope*, std::vector<ast::Def>*>> pending_;
    std::map<std::string, const Callable*> builtins_;
    std::vector<std::vector<Edge>> edges_;
};

Program resolve_imports(Query query, const ModuleLoader& loader, const ExternalRegistry* registry) {
    return Linker(loader, registry).link(std::move(query));
}

Program link_query(std::string_view source, const std::string& file, const ModuleLoader& loader,
                   const ExternalRegistry* registry) {
    return resolve_imports(parse_query(source, file), loader, registry);
}

}  // namespace pathquery
