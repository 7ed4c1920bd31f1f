#include "pathquery/evaluator.hpp"

#include <algorithm>
#include <map>

#include "pathquery/error.hpp"

namespace pathquery {

namespace {

// Persistent binding list shared between flow items. Variables defined with
// `def`, variables attached with `bind`, and collections live in one chain;
// lookups take the innermost match of the right sort.
struct Binding {
    enum class Kind { Def, Bind, Coll };

    Kind kind;
    std::string name;
    Value value;
    std::vector<Value> coll;
    std::shared_ptr<const Binding> next;
};

using BindingList = std::shared_ptr<const Binding>;

BindingList push_var(BindingList next, Binding::Kind kind, std::string name, Value v) {
    return std::make_shared<const Binding>(Binding{kind, std::move(name), std::move(v), {}, std::move(next)});
}

BindingList push_coll(BindingList next, std::string name, std::vector<Value> values) {
    return std::make_shared<const Binding>(
        Binding{Binding::Kind::Coll, std::move(name), Value{}, std::move(values), std::move(next)});
}

// Re-applies the `bind` bindings found above `base` in `head` on top of
// `base`, dropping everything else that was defined in between.
BindingList keep_binds(const BindingList& head, const BindingList& base) {
    std::vector<const Binding*> binds;
    for (const Binding* b = head.get(); b && b != base.get(); b = b->next.get()) {
        if (b->kind == Binding::Kind::Bind) binds.push_back(b);
    }
    BindingList out = base;
    for (auto it = binds.rbegin(); it != binds.rend(); ++it) out = push_var(out, Binding::Kind::Bind, (*it)->name, (*it)->value);
    return out;
}

using CurPtr = std::shared_ptr<const std::optional<Value>>;

struct Env {
    BindingList vars;
    CurPtr cur;  // null: ?cur is the item's own value
};

// A value in flight. An absent value is the unit input the query starts
// from; an absent root means no source path has been reached yet.
struct Item {
    std::optional<Value> value;
    std::optional<Value> root;
    Env env;
};

using Items = std::vector<Item>;

Item derive(const Item& from, Value v) {
    std::optional<Value> root = from.root;
    if (!root && !v.is_record()) root = v;
    return Item{std::move(v), std::move(root), from.env};
}

CurPtr cur_of(const Item& x) { return std::make_shared<const std::optional<Value>>(x.value); }

Item with_cur(const Item& x) { return Item{x.value, x.root, Env{x.env.vars, cur_of(x)}}; }

std::vector<Value> values_of(const Items& items) {
    std::vector<Value> out;
    out.reserve(items.size());
    for (const auto& i : items) {
        if (i.value) out.push_back(*i.value);
    }
    return out;
}

const Binding* lookup(const BindingList& list, std::string_view name, bool collection) {
    for (const Binding* b = list.get(); b; b = b->next.get()) {
        if (b->name != name) continue;
        if ((b->kind == Binding::Kind::Coll) == collection) return b;
    }
    return nullptr;
}

std::int64_t checked(std::int64_t a, std::int64_t b, ArithOp op, SourceLoc loc) {
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
        case ArithOp::Add: overflow = __builtin_add_overflow(a, b, &r); break;
        case ArithOp::Sub: overflow = __builtin_sub_overflow(a, b, &r); break;
        case ArithOp::Mul: overflow = __builtin_mul_overflow(a, b, &r); break;
        case ArithOp::Div: break;
    }
    if (overflow) throw EvalError("integer overflow", loc);
    return r;
}

std::optional<Value> arith(const Value& a, const Value& b, ArithOp op, SourceLoc loc) {
    if (!a.is_numeric() || !b.is_numeric()) return std::nullopt;
    if (a.is(Type::Int) && b.is(Type::Int)) {
        if (op != ArithOp::Div) return Value::integer(checked(a.as_int(), b.as_int(), op, loc));
        if (b.as_int() == 0) return std::nullopt;
        return Value::real(static_cast<double>(a.as_int()) / static_cast<double>(b.as_int()));
    }
    double x = a.as_number();
    double y = b.as_number();
    switch (op) {
        case ArithOp::Add: return Value::real(x + y);
        case ArithOp::Sub: return Value::real(x - y);
        case ArithOp::Mul: return Value::real(x * y);
        case ArithOp::Div: return Value::real(x / y);
    }
    return std::nullopt;
}

class Evaluator {
public:
    Evaluator(const Program& program, const Graph& graph, const EvalOptions& options)
        : program_(program), graph_(graph), options_(options), depth_(program.callables().size(), 0) {}

    QueryResult run() {
        QueryResult result;
        Items outs;
        eval(program_.root(), Item{}, outs);
        for (auto& o : outs) {
            if (!o.value) continue;
            if (!o.root) throw EvalError("query output has no root value; a record cannot be a root", program_.root().loc);
            result.pairs.push_back(ResultPair{std::move(*o.root), std::move(*o.value)});
        }
        return result;
    }

private:
    Items eval(const Expr& e, const Item& x) {
        Items out;
        eval(e, x, out);
        return out;
    }

    void eval(const Expr& e, const Item& x, Items& out) {
        std::visit([&](const auto& n) { step(n, e, x, out); }, e.node);
    }

    // -- sources -------------------------------------------------------------

    void step(const ast::Entities&, const Expr&, const Item& x, Items& out) {
        for (const auto& v : graph_.all_entities()) out.push_back(derive(x, v));
    }

    void step(const ast::Roots&, const Expr& e, const Item& x, Items& out) {
        if (!options_.roots) return step(ast::Entities{}, e, x, out);
        for (const auto& v : *options_.roots) out.push_back(derive(x, v));
    }

    void step(const ast::Literal& n, const Expr&, const Item& x, Items& out) { out.push_back(derive(x, n.value)); }

    void step(const ast::Predicate& n, const Expr&, const Item& x, Items& out) {
        if (!x.value) return;
        auto edges = n.direction == Direction::Forward ? graph_.out_edges(*x.value, n.label)
                                                       : graph_.in_edges(*x.value, n.label);
        for (const auto& v : edges) out.push_back(derive(x, v));
    }

    // -- composition -----------------------------------------------------------

    void step(const ast::Dot& n, const Expr&, const Item& x, Items& out) {
        for (const auto& mid : eval(*n.left, x)) eval(*n.right, mid, out);
    }

    void step(const ast::Filter& n, const Expr&, const Item& x, Items& out) {
        switch (n.kind) {
            case FilterKind::Where: {
                for (const auto& o : eval(*n.body, with_cur(x))) {
                    if (o.value && is_truthy(*o.value)) {
                        out.push_back(x);
                        return;
                    }
                }
                return;
            }
            case FilterKind::Require:
                if (!eval(*n.body, x).empty()) out.push_back(x);
                return;
            case FilterKind::Prohibit:
                if (eval(*n.body, x).empty()) out.push_back(x);
                return;
            case FilterKind::Optional: {
                Items body = eval(*n.body, x);
                if (body.empty()) {
                    out.push_back(x);
                } else {
                    out.insert(out.end(), std::make_move_iterator(body.begin()), std::make_move_iterator(body.end()));
                }
                return;
            }
        }
    }

    void step(const ast::Tuple& n, const Expr&, const Item& x, Items& out) {
        for (const auto& b : n.branches) eval(*b, x, out);
    }

    void step(const ast::Block& n, const Expr&, const Item& x, Items& out) {
        CurPtr cur = cur_of(x);
        Items conts{Item{x.value, x.root, Env{x.env.vars, cur}}};
        auto finish = [&](Item o) {
            o.env = Env{keep_binds(o.env.vars, x.env.vars), x.env.cur};
            out.push_back(std::move(o));
        };
        for (std::size_t i = 0; i < n.elements.size(); ++i) {
            const auto& el = n.elements[i];
            bool last = i + 1 == n.elements.size();
            Items next;
            for (const auto& c : conts) {
                Item input{x.value, c.root, Env{c.env.vars, cur}};
                if (const auto* p = std::get_if<ExprPtr>(&el.item)) {
                    Items outs = eval(**p, input);
                    for (auto& o : outs) {
                        if (last) {
                            finish(std::move(o));
                        } else {
                            next.push_back(std::move(o));
                        }
                    }
                    continue;
                }
                Items defined = define(std::get<ast::Def>(el.item), input);
                for (auto& d : defined) {
                    if (last) {
                        finish(std::move(d));
                    } else {
                        next.push_back(std::move(d));
                    }
                }
            }
            conts = std::move(next);
            if (conts.empty()) return;
        }
    }

    // Continuations produced by a block-level definition.
    Items define(const ast::Def& d, const Item& input) {
        if (const auto* v = std::get_if<ast::VarDef>(&d)) {
            std::vector<Value> vals = values_of(eval(*v->body, input));
            if (vals.empty()) return v->required ? Items{} : Items{input};
            Items out;
            for (auto& val : vals) {
                Item c = input;
                c.env.vars = push_var(input.env.vars, Binding::Kind::Def, v->name, std::move(val));
                out.push_back(std::move(c));
            }
            return out;
        }
        if (const auto* c = std::get_if<ast::CollDef>(&d)) {
            std::vector<Value> vals = values_of(eval(*c->body, input));
            if (vals.empty() && c->required) return {};
            Item k = input;
            k.env.vars = push_coll(input.env.vars, c->name, std::move(vals));
            return {std::move(k)};
        }
        return {input};  // function definitions are resolved statically
    }

    void step(const ast::Classify& n, const Expr&, const Item& x, Items& out) {
        Item inner = with_cur(x);
        const Expr* chosen = n.otherwise.get();
        bool matched = false;
        for (const auto& c : n.cases) {
            if (!eval(*c.condition, inner).empty()) {
                chosen = c.body.get();
                matched = true;
                break;
            }
        }
        if (!matched && !chosen) {
            out.push_back(x);
            return;
        }
        for (auto& o : eval(*chosen, inner)) {
            o.env.cur = x.env.cur;
            out.push_back(std::move(o));
        }
    }

    // -- records -------------------------------------------------------------

    void step(const ast::RecordCtor& n, const Expr&, const Item& x, Items& out) {
        Item inner = with_cur(x);
        RecordBuilder b;
        for (const auto& f : n.fields) {
            std::vector<Value> vals = values_of(eval(*f.value, inner));
            if (vals.empty()) {
                if (f.required) return;
                continue;
            }
            for (auto& v : vals) {
                if (!f.is_merge()) {
                    b.add(f.name, std::move(v));
                } else if (v.is_record()) {
                    b.merge(v.as_record());
                } else {
                    throw EvalError("@merge value must be a Record, got " + std::string(type_name(v.type())) + " " +
                                        render_literal(v),
                                    f.value->loc);
                }
            }
        }
        if (b.empty()) return;
        out.push_back(derive(x, Value::record(std::move(b).build())));
    }

    void step(const ast::FieldAccess& n, const Expr&, const Item& x, Items& out) {
        for (const auto& o : eval(*n.base, x)) {
            if (!o.value || !o.value->is_record()) continue;
            std::vector<Value> frontier{*o.value};
            for (const auto& name : n.names) {
                std::vector<Value> next;
                for (const auto& r : frontier) {
                    if (!r.is_record()) continue;
                    if (const auto* vals = r.as_record().find(name)) next.insert(next.end(), vals->begin(), vals->end());
                }
                frontier = std::move(next);
            }
            for (auto& v : frontier) out.push_back(derive(o, std::move(v)));
        }
    }

    // -- operators -------------------------------------------------------------

    void step(const ast::Compare& n, const Expr&, const Item& x, Items& out) {
        std::vector<Value> left = values_of(eval(*n.left, x));
        bool hit = false;
        if (!left.empty()) {
            std::vector<Value> right = values_of(eval(*n.right, x));
            for (const auto& a : left) {
                for (const auto& b : right) {
                    if (equals(a, b)) {
                        hit = true;
                        break;
                    }
                }
                if (hit) break;
            }
        }
        out.push_back(derive(x, Value::boolean(hit)));
    }

    void step(const ast::Arith& n, const Expr& e, const Item& x, Items& out) {
        std::vector<Value> left = values_of(eval(*n.left, x));
        if (left.empty()) return;
        std::vector<Value> right = values_of(eval(*n.right, x));
        for (const auto& a : left) {
            for (const auto& b : right) {
                if (auto r = arith(a, b, n.op, e.loc)) out.push_back(derive(x, std::move(*r)));
            }
        }
    }

    void step(const ast::Bind& n, const Expr&, const Item& x, Items& out) {
        for (auto& o : eval(*n.body, x)) {
            if (o.value) o.env.vars = push_var(o.env.vars, Binding::Kind::Bind, n.var, *o.value);
            out.push_back(std::move(o));
        }
    }

    void step(const ast::VarRef& n, const Expr&, const Item& x, Items& out) {
        if (const Binding* b = lookup(x.env.vars, n.name, false)) out.push_back(derive(x, b->value));
    }

    void step(const ast::CollRef& n, const Expr&, const Item& x, Items& out) {
        if (const Binding* b = lookup(x.env.vars, n.name, true)) {
            for (const auto& v : b->coll) out.push_back(derive(x, v));
        }
    }

    void step(const ast::CurRef&, const Expr&, const Item& x, Items& out) {
        const std::optional<Value>& cur = x.env.cur ? *x.env.cur : x.value;
        if (cur) out.push_back(derive(x, *cur));
    }

    void step(const ast::RootRef&, const Expr&, const Item& x, Items& out) {
        if (x.root) out.push_back(derive(x, *x.root));
    }

    void step(const ast::ParamsRef&, const Expr&, const Item& x, Items& out) {
        if (options_.params) out.push_back(derive(x, *options_.params));
    }

    // -- calls ----------------------------------------------------------------

    void step(const ast::Call& n, const Expr& e, const Item& x, Items& out) {
        std::string shown = n.ns.empty() ? n.name : n.ns + "::" + n.name;
        if (!n.target) throw EvalError("unresolved function '" + shown + "'", e.loc);
        const Callable& c = *n.target;
        switch (c.kind) {
            case Callable::Kind::TextLang:
                if (x.value) {
                    if (auto v = builtin_text_lang(*x.value)) out.push_back(derive(x, std::move(*v)));
                }
                return;
            case Callable::Kind::Stub: throw EvalError("not implemented: " + c.qualified_name, e.loc);
            case Callable::Kind::External: return call_external(n, c, shown, e, x, out);
            case Callable::Kind::Function:
            case Callable::Kind::Bounded: return call_function(n, c, x, out);
        }
    }

    void call_external(const ast::Call& n, const Callable& c, const std::string& shown, const Expr& e, const Item& x,
                       Items& out) {
        const HostFunction* host = c.host;
        if (!host && options_.externals) host = options_.externals->lookup_external(c.external->implemented_by);
        if (!host) {
            throw EvalError("external function '" + shown + "' is not registered (implemented_by '" +
                                c.external->implemented_by + "')",
                            e.loc);
        }
        std::vector<std::vector<Value>> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) args.push_back(values_of(eval(*a, x)));
        for (auto& v : (*host)(args)) out.push_back(derive(x, std::move(v)));
    }

    struct DepthGuard {
        int& d;
        explicit DepthGuard(int& depth) : d(depth) { ++d; }
        ~DepthGuard() { --d; }
    };

    void call_function(const ast::Call& n, const Callable& c, const Item& x, Items& out) {
        const ast::FuncDef* def = c.plain;
        int* depth = nullptr;
        if (c.kind == Callable::Kind::Bounded) {
            depth = &depth_[c.index];
            int next = *depth + 1;
            if (next > c.bound) return;
            def = next < c.bound ? c.recur : c.base;
        }
        std::vector<std::vector<Value>> args;
        args.reserve(n.args.size());
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            args.push_back(values_of(eval(*n.args[i], x)));
            if (!c.params[i].collection && args.back().empty()) return;
        }
        // Odometer over the variable parameters' values.
        std::vector<std::size_t> pick(args.size(), 0);
        for (;;) {
            BindingList vars;
            for (std::size_t i = 0; i < args.size(); ++i) {
                const std::string& name = def->params[i].name;
                if (c.params[i].collection) {
                    vars = push_coll(vars, name, args[i]);
                } else {
                    vars = push_var(vars, Binding::Kind::Def, name, args[i][pick[i]]);
                }
            }
            Item in{x.value, x.root, Env{std::move(vars), nullptr}};
            Items outs;
            if (depth) {
                DepthGuard guard(*depth);
                eval(*def->body, in, outs);
            } else {
                eval(*def->body, in, outs);
            }
            for (auto& o : outs) out.push_back(Item{std::move(o.value), std::move(o.root), x.env});

            std::size_t i = 0;
            for (; i < args.size(); ++i) {
                if (c.params[i].collection) continue;
                if (++pick[i] < args[i].size()) break;
                pick[i] = 0;
            }
            if (i == args.size()) return;
        }
    }

    // -- aggregates -------------------------------------------------------------

    struct Keyed {
        Item item;
        std::vector<std::optional<Value>> keys;
    };

    Items candidates(const ast::Aggregate& n, const Item& x) {
        Items body = eval(*n.args[0], x);
        std::erase_if(body, [](const Item& i) { return !i.value; });
        return body;
    }

    // Effective direction per key: `descending` flag, flipped for Rtop.
    std::vector<Keyed> keyed(const ast::Aggregate& n, Items items, bool flip) {
        std::vector<Keyed> out;
        out.reserve(items.size());
        for (auto& it : items) {
            Keyed k{std::move(it), {}};
            for (const auto& key : n.keys) {
                bool desc = key.descending != flip;
                std::vector<Value> vals = values_of(eval(*key.path, with_cur(k.item)));
                std::optional<Value> pick;
                for (auto& v : vals) {
                    if (!pick || (desc ? compare(v, *pick) > 0 : compare(v, *pick) < 0)) pick = std::move(v);
                }
                k.keys.push_back(std::move(pick));
            }
            out.push_back(std::move(k));
        }
        return out;
    }

    static std::weak_ordering order(const ast::Aggregate& n, const Keyed& a, const Keyed& b, bool flip) {
        if (n.keys.empty()) {
            auto c = compare(*a.item.value, *b.item.value);
            return flip ? 0 <=> c : c;
        }
        for (std::size_t i = 0; i < n.keys.size(); ++i) {
            const auto& ka = a.keys[i];
            const auto& kb = b.keys[i];
            if (!ka || !kb) {
                if (!ka && !kb) continue;
                return ka ? std::weak_ordering::less : std::weak_ordering::greater;  // missing keys sort last
            }
            auto c = compare(*ka, *kb);
            if (n.keys[i].descending != flip) c = 0 <=> c;
            if (c != 0) return c;
        }
        return std::weak_ordering::equivalent;
    }

    std::vector<Keyed> sorted(const ast::Aggregate& n, Items items, bool flip) {
        std::vector<Keyed> ks = keyed(n, std::move(items), flip);
        std::stable_sort(ks.begin(), ks.end(), [&](const Keyed& a, const Keyed& b) { return order(n, a, b, flip) < 0; });
        return ks;
    }

    std::optional<std::int64_t> count_arg(const Expr& arg, const Item& x, std::string_view what) {
        std::vector<Value> vals = values_of(eval(arg, x));
        if (vals.empty()) return std::nullopt;
        if (vals.size() > 1) throw EvalError(std::string(what) + " must be a single value", arg.loc);
        if (!vals[0].is(Type::Int) || vals[0].as_int() < 0) {
            throw EvalError(std::string(what) + " must be a non-negative Int, got " + render_literal(vals[0]), arg.loc);
        }
        return vals[0].as_int();
    }

    static bool same_keys(const Keyed& a, const Keyed& b) {
        for (std::size_t i = 0; i < a.keys.size(); ++i) {
            if (a.keys[i].has_value() != b.keys[i].has_value()) return false;
            if (a.keys[i] && !equals(*a.keys[i], *b.keys[i])) return false;
        }
        return true;
    }

    void dedup(const ast::Aggregate& n, Items items, Items& out) {
        if (!n.keys.empty()) {
            std::vector<Keyed> kept;
            for (auto& k : keyed(n, std::move(items), false)) {
                bool dup = std::any_of(kept.begin(), kept.end(), [&](const Keyed& o) { return same_keys(o, k); });
                if (!dup) kept.push_back(std::move(k));
            }
            for (auto& k : kept) out.push_back(std::move(k.item));
            return;
        }
        // Bucket by the ordering, then confirm with equality inside a bucket.
        std::multimap<Value, std::size_t, ValueLess> seen;
        for (std::size_t i = 0; i < items.size(); ++i) {
            const Value& v = *items[i].value;
            auto [lo, hi] = seen.equal_range(v);
            bool dup = std::any_of(lo, hi, [&](const auto& kv) { return equals(*items[kv.second].value, v); });
            if (dup) continue;
            seen.emplace(v, i);
            out.push_back(items[i]);
        }
    }

    void step(const ast::Aggregate& n, const Expr& e, const Item& x, Items& out) {
        switch (n.kind) {
            case AggregateKind::Count:
                out.push_back(derive(x, Value::integer(static_cast<std::int64_t>(candidates(n, x).size()))));
                return;
            case AggregateKind::Sum: {
                std::vector<Value> vals = values_of(candidates(n, x));
                Value total = Value::integer(0);
                for (const auto& v : vals) {
                    if (!v.is_numeric()) return;
                }
                for (const auto& v : vals) total = *arith(total, v, ArithOp::Add, e.loc);
                out.push_back(derive(x, std::move(total)));
                return;
            }
            case AggregateKind::Min:
            case AggregateKind::Max: {
                Items items = candidates(n, x);
                if (items.empty()) return;
                bool flip = n.kind == AggregateKind::Max;
                std::vector<Keyed> ks = keyed(n, std::move(items), flip);
                std::size_t best = 0;
                for (std::size_t i = 1; i < ks.size(); ++i) {
                    if (order(n, ks[i], ks[best], flip) < 0) best = i;
                }
                out.push_back(std::move(ks[best].item));
                return;
            }
            case AggregateKind::Dedup: return dedup(n, candidates(n, x), out);
            case AggregateKind::Slice: {
                auto len = count_arg(*n.args[1], x, "Slice length");
                std::optional<std::int64_t> off = std::int64_t{0};
                if (n.args.size() > 2) off = count_arg(*n.args[2], x, "Slice offset");
                if (!len || !off) return;
                Items items = candidates(n, x);
                std::size_t begin = std::min<std::uint64_t>(static_cast<std::uint64_t>(*off), items.size());
                std::size_t take = std::min<std::uint64_t>(static_cast<std::uint64_t>(*len), items.size() - begin);
                for (std::size_t i = begin; i < begin + take; ++i) out.push_back(std::move(items[i]));
                return;
            }
            case AggregateKind::Top:
            case AggregateKind::Rtop: {
                auto k = count_arg(*n.args[1], x, std::string(aggregate_name(n.kind)) + " count");
                if (!k) return;
                std::vector<Keyed> ks = sorted(n, candidates(n, x), n.kind == AggregateKind::Rtop);
                std::size_t take = static_cast<std::size_t>(std::min<std::int64_t>(*k, static_cast<std::int64_t>(ks.size())));
                for (std::size_t i = 0; i < take; ++i) out.push_back(std::move(ks[i].item));
                return;
            }
            case AggregateKind::Sort:
                for (auto& k : sorted(n, candidates(n, x), false)) out.push_back(std::move(k.item));
                return;
        }
    }

    const Program& program_;
    const Graph& graph_;
    const EvalOptions& options_;
    std::vector<int> depth_;  // active call depth per bounded callable
};

}  // namespace

QueryResult eval_query(const Program& program, const Graph& graph, const EvalOptions& options) {
    if (options.params && !options.params->is_record()) {
        throw EvalError("?params must be a Record, got " + std::string(type_name(options.params->type())));
    }
    return Evaluator(program, graph, options).run();
}

std::vector<ResultPair> canonical_order(std::vector<ResultPair> pairs) {
    std::stable_sort(pairs.begin(), pairs.end(), [](const ResultPair& a, const ResultPair& b) {
        if (auto c = compare(a.root, b.root); c != 0) return c < 0;
        return compare(a.value, b.value) < 0;
    });
    return pairs;
}

}  // namespace pathquery
