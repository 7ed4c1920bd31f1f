#include <sstream>

#include "pathquery/parser.hpp"

namespace pathquery {

namespace {

using namespace ast;

enum Level { kCompare = 0, kAdditive = 1, kMultiplicative = 2, kPostfix = 3, kPrimary = 4 };

int level_of(const Expr& e) {
    if (e.as<Compare>()) return kCompare;
    if (const auto* a = e.as<Arith>()) return (a->op == ArithOp::Add || a->op == ArithOp::Sub) ? kAdditive : kMultiplicative;
    if (e.as<ast::Dot>() || e.as<FieldAccess>() || e.as<Bind>()) return kPostfix;
    return kPrimary;
}

std::string render(const Expr& e, int min_level);

std::string render_params(const std::vector<Param>& params) {
    std::string out = "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += (params[i].collection ? "$" : "?") + params[i].name;
    }
    return out + ")";
}

std::string render_def(const ast::Def& d) {
    if (const auto* v = std::get_if<VarDef>(&d)) {
        return std::string(v->required ? "require " : "") + "def ?" + v->name + " " + render(*v->body, kCompare);
    }
    if (const auto* c = std::get_if<CollDef>(&d)) {
        return std::string(c->required ? "require " : "") + "def $" + c->name + " " + render(*c->body, kCompare);
    }
    if (const auto* f = std::get_if<FuncDef>(&d)) {
        std::string out = "def ";
        if (f->kind == FuncKind::Base) out += "base ";
        if (f->kind == FuncKind::Recur) out += "recur<" + std::to_string(f->bound) + "> ";
        return out + f->name + render_params(f->params) + " " + render(*f->body, kPrimary);
    }
    const auto& x = std::get<ExternalDef>(d);
    return std::string("external def ") + (x.expr ? "expr " : "") + x.name + render_params(x.params) +
           " implemented_by " + quote_string(x.implemented_by);
}

std::string render_key(const SortKey& k) {
    std::string body = render(*k.path, kCompare);
    if (k.descending) return "-" + body;
    if (!body.empty() && body[0] == '-') return "(" + body + ")";
    return body;
}

std::string arith_symbol(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
    }
    return "?";
}

std::string render_node(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Entities>) {
                return "@entities";
            } else if constexpr (std::is_same_v<T, Roots>) {
                return "@roots";
            } else if constexpr (std::is_same_v<T, CurRef>) {
                return "?cur";
            } else if constexpr (std::is_same_v<T, RootRef>) {
                return "?root";
            } else if constexpr (std::is_same_v<T, ParamsRef>) {
                return "?params";
            } else if constexpr (std::is_same_v<T, Literal>) {
                return render_literal(n.value);
            } else if constexpr (std::is_same_v<T, Predicate>) {
                return (n.direction == Direction::Reverse ? "!" : "") + n.label;
            } else if constexpr (std::is_same_v<T, ast::Dot>) {
                std::string right = render(*n.right, kPrimary);
                // `5.5` would lex as a Double.
                bool digit = !right.empty() && right[0] >= '0' && right[0] <= '9';
                return render(*n.left, kPostfix) + (digit ? ". " : ".") + right;
            } else if constexpr (std::is_same_v<T, Filter>) {
                if (n.kind == FilterKind::Where) return "[" + render(*n.body, kCompare) + "]";
                return std::string(filter_keyword(n.kind)) + "(" + render(*n.body, kCompare) + ")";
            } else if constexpr (std::is_same_v<T, Tuple>) {
                std::string out = "(";
                for (std::size_t i = 0; i < n.branches.size(); ++i) {
                    if (i) out += ", ";
                    out += render(*n.branches[i], kCompare);
                }
                return out + (n.branches.size() == 1 ? ",)" : ")");
            } else if constexpr (std::is_same_v<T, Block>) {
                std::string out = "{ ";
                for (std::size_t i = 0; i < n.elements.size(); ++i) {
                    if (i) out += "; ";
                    const auto& item = n.elements[i].item;
                    if (const auto* p = std::get_if<ExprPtr>(&item)) {
                        out += render(**p, kCompare);
                    } else {
                        out += render_def(std::get<ast::Def>(item));
                    }
                }
                return out + " }";
            } else if constexpr (std::is_same_v<T, Classify>) {
                std::string out = "classify { ";
                for (const auto& c : n.cases) {
                    out += render(*c.condition, kCompare) + ": " + render(*c.body, kCompare) + " ";
                }
                if (n.otherwise) out += "else: " + render(*n.otherwise, kCompare) + " ";
                return out + "}";
            } else if constexpr (std::is_same_v<T, RecordCtor>) {
                std::string out = "{ ";
                for (const auto& f : n.fields) {
                    out += std::string(f.required ? "require " : "") + f.name + ": " + render(*f.value, kCompare) + " ";
                }
                return out + "}";
            } else if constexpr (std::is_same_v<T, FieldAccess>) {
                std::string out = n.base->template as<FieldAccess>() ? "(" + render(*n.base, kCompare) + ")"
                                                                     : render(*n.base, kPostfix);
                for (const auto& name : n.names) out += "->" + name;
                return out;
            } else if constexpr (std::is_same_v<T, Compare>) {
                return render(*n.left, kAdditive) + " == " + render(*n.right, kAdditive);
            } else if constexpr (std::is_same_v<T, Arith>) {
                int lvl = level_of(e);
                return render(*n.left, lvl) + " " + arith_symbol(n.op) + " " + render(*n.right, lvl + 1);
            } else if constexpr (std::is_same_v<T, Bind>) {
                return render(*n.body, kPostfix) + ".bind(?" + n.var + ")";
            } else if constexpr (std::is_same_v<T, VarRef>) {
                return "?" + n.name;
            } else if constexpr (std::is_same_v<T, CollRef>) {
                return "$" + n.name;
            } else if constexpr (std::is_same_v<T, Call>) {
                std::string out = n.ns.empty() ? n.name : n.ns + "::" + n.name;
                out += "(";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    out += render(*n.args[i], kCompare);
                }
                return out + ")";
            } else if constexpr (std::is_same_v<T, Aggregate>) {
                std::string out = std::string(aggregate_name(n.kind)) + "(";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    out += render(*n.args[i], kCompare);
                }
                for (const auto& k : n.keys) out += ", " + render_key(k);
                return out + ")";
            }
        },
        e.node);
}

std::string render(const Expr& e, int min_level) {
    std::string s = render_node(e);
    if (level_of(e) < min_level) return "(" + s + ")";
    return s;
}

// -- structural dump -----------------------------------------------------------

class Dumper {
public:
    std::string take() { return out_.str(); }

    void expr(const Expr& e, int indent) {
        std::visit([&](const auto& n) { node(n, indent); }, e.node);
    }

    void def(const ast::Def& d, int indent) {
        if (const auto* v = std::get_if<VarDef>(&d)) {
            line(indent, std::string(v->required ? "RequireDef" : "Def") + " ?" + v->name);
            expr(*v->body, indent + 1);
        } else if (const auto* c = std::get_if<CollDef>(&d)) {
            line(indent, std::string(c->required ? "RequireDef" : "Def") + " $" + c->name);
            expr(*c->body, indent + 1);
        } else if (const auto* f = std::get_if<FuncDef>(&d)) {
            std::string kind = f->kind == FuncKind::Plain  ? "FuncDef"
                               : f->kind == FuncKind::Base ? "FuncDef base"
                                                           : "FuncDef recur<" + std::to_string(f->bound) + ">";
            line(indent, kind + " " + f->name + render_params(f->params));
            expr(*f->body, indent + 1);
        } else {
            const auto& x = std::get<ExternalDef>(d);
            line(indent, std::string("ExternalDef") + (x.expr ? " expr " : " ") + x.name + render_params(x.params) +
                             " implemented_by " + quote_string(x.implemented_by));
        }
    }

    void imports(const std::vector<Import>& imps) {
        for (const auto& i : imps) {
            line(0, "Import " + quote_string(i.path) + (i.alias ? " into " + *i.alias : "") + " as " + i.namespace_name());
        }
    }

private:
    void line(int indent, const std::string& s) { out_ << std::string(static_cast<std::size_t>(indent) * 2, ' ') << s << '\n'; }

    void node(const Entities&, int i) { line(i, "Entities"); }
    void node(const Roots&, int i) { line(i, "Roots"); }
    void node(const CurRef&, int i) { line(i, "CurRef"); }
    void node(const RootRef&, int i) { line(i, "RootRef"); }
    void node(const ParamsRef&, int i) { line(i, "ParamsRef"); }
    void node(const Literal& n, int i) {
        std::string lit = render_literal(n.value);
        for (auto& c : lit) {
            if (c == '\n') c = ' ';
        }
        line(i, "Literal " + lit);
    }
    void node(const Predicate& n, int i) {
        line(i, std::string("Predicate ") + n.label + (n.direction == Direction::Reverse ? " reverse" : ""));
    }
    void node(const ast::Dot& n, int i) {
        line(i, "Dot");
        expr(*n.left, i + 1);
        expr(*n.right, i + 1);
    }
    void node(const Filter& n, int i) {
        static constexpr const char* kNames[] = {"Where", "Require", "Prohibit", "Optional"};
        line(i, kNames[static_cast<int>(n.kind)]);
        expr(*n.body, i + 1);
    }
    void node(const Tuple& n, int i) {
        line(i, "Tuple");
        for (const auto& b : n.branches) expr(*b, i + 1);
    }
    void node(const Block& n, int i) {
        line(i, "Block");
        for (const auto& el : n.elements) {
            if (const auto* p = std::get_if<ExprPtr>(&el.item)) {
                expr(**p, i + 1);
            } else {
                def(std::get<ast::Def>(el.item), i + 1);
            }
        }
    }
    void node(const Classify& n, int i) {
        line(i, "Classify");
        for (const auto& c : n.cases) {
            line(i + 1, "Case");
            expr(*c.condition, i + 2);
            expr(*c.body, i + 2);
        }
        if (n.otherwise) {
            line(i + 1, "Else");
            expr(*n.otherwise, i + 2);
        }
    }
    void node(const RecordCtor& n, int i) {
        line(i, "Record");
        for (const auto& f : n.fields) {
            line(i + 1, std::string("Field ") + (f.required ? "require " : "") + f.name);
            expr(*f.value, i + 2);
        }
    }
    void node(const FieldAccess& n, int i) {
        std::string names;
        for (const auto& f : n.names) names += " ->" + f;
        line(i, "FieldAccess" + names);
        expr(*n.base, i + 1);
    }
    void node(const Compare& n, int i) {
        line(i, "Compare ==");
        expr(*n.left, i + 1);
        expr(*n.right, i + 1);
    }
    void node(const Arith& n, int i) {
        line(i, "Arith " + arith_symbol(n.op));
        expr(*n.left, i + 1);
        expr(*n.right, i + 1);
    }
    void node(const Bind& n, int i) {
        line(i, "Bind ?" + n.var);
        expr(*n.body, i + 1);
    }
    void node(const VarRef& n, int i) { line(i, "VarRef ?" + n.name); }
    void node(const CollRef& n, int i) { line(i, "CollRef $" + n.name); }
    void node(const Call& n, int i) {
        line(i, "Call " + (n.ns.empty() ? n.name : n.ns + "::" + n.name));
        for (const auto& a : n.args) expr(*a, i + 1);
    }
    void node(const Aggregate& n, int i) {
        line(i, "Aggregate " + std::string(aggregate_name(n.kind)));
        for (const auto& a : n.args) expr(*a, i + 1);
        for (const auto& k : n.keys) {
            line(i + 1, k.descending ? "Key descending" : "Key");
            expr(*k.path, i + 2);
        }
    }

    std::ostringstream out_;
};

}  // namespace

std::string render_expr(const Expr& e) { return render(e, kCompare); }

std::string render_query(const Query& q) {
    std::string out;
    for (const auto& i : q.imports) {
        out += "import " + quote_string(i.path) + (i.alias ? " into " + *i.alias : "") + "\n";
    }
    for (const auto& d : q.defs) out += render_def(d) + "\n";
    return out + render_expr(*q.root) + "\n";
}

std::string render_module(const Module& m) {
    std::string out;
    for (const auto& i : m.imports) {
        out += "import " + quote_string(i.path) + (i.alias ? " into " + *i.alias : "") + "\n";
    }
    for (const auto& d : m.defs) out += render_def(d) + "\n";
    return out;
}

std::string dump_expr(const Expr& e, int indent) {
    Dumper d;
    d.expr(e, indent);
    return d.take();
}

std::string dump_query(const Query& q) {
    Dumper d;
    d.imports(q.imports);
    for (const auto& def : q.defs) d.def(def, 0);
    d.expr(*q.root, 0);
    return d.take();
}

std::string dump_module(const Module& m) {
    Dumper d;
    d.imports(m.imports);
    for (const auto& def : m.defs) d.def(def, 0);
    return d.take();
}

}  // namespace pathquery
