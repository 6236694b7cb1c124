#include "creol2ta/ta/expr.hpp"

#include <sstream>

namespace creol2ta::ta {

namespace {

std::shared_ptr<Expr> make(Expr::Kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

}  // namespace

ExprPtr Expr::int_lit(long v) {
    auto e = make(Kind::IntLit);
    e->value = v;
    return e;
}

ExprPtr Expr::bool_lit(bool b) {
    auto e = make(Kind::BoolLit);
    e->value = b ? 1 : 0;
    return e;
}

ExprPtr Expr::var(std::string n) {
    auto e = make(Kind::Name);
    e->name = std::move(n);
    return e;
}

ExprPtr Expr::index(std::string base, std::vector<ExprPtr> idx) {
    auto e = make(Kind::Index);
    e->name = std::move(base);
    e->args = std::move(idx);
    return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr sub) {
    auto e = make(Kind::Unary);
    e->un = op;
    e->args = {std::move(sub)};
    return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr l, ExprPtr r) {
    auto e = make(Kind::Binary);
    e->bin = op;
    e->args = {std::move(l), std::move(r)};
    return e;
}

ExprPtr Expr::call(std::string fn, std::vector<ExprPtr> a) {
    auto e = make(Kind::Call);
    e->name = std::move(fn);
    e->args = std::move(a);
    return e;
}

ExprPtr Expr::and_of(ExprPtr l, ExprPtr r) {
    if (!l || is_true_literal(l)) return r;
    if (!r || is_true_literal(r)) return l;
    return binary(BinOp::And, std::move(l), std::move(r));
}

bool is_true_literal(const ExprPtr& e) {
    if (!e) return true;
    return (e->kind == Expr::Kind::BoolLit || e->kind == Expr::Kind::IntLit) && e->value != 0;
}

namespace {

// Precedence: || < && < comparisons < additive < unary < atoms.
int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            switch (e.bin) {
                case BinOp::Or: return 1;
                case BinOp::And: return 2;
                case BinOp::Eq:
                case BinOp::Ne:
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge: return 3;
                case BinOp::Add:
                case BinOp::Sub: return 4;
            }
            return 4;
        case Expr::Kind::Unary: return 5;
        default: return 6;
    }
}

const char* op_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return " + ";
        case BinOp::Sub: return " - ";
        case BinOp::And: return " && ";
        case BinOp::Or: return " || ";
        case BinOp::Lt: return " < ";
        case BinOp::Le: return " <= ";
        case BinOp::Gt: return " > ";
        case BinOp::Ge: return " >= ";
        case BinOp::Eq: return " == ";
        case BinOp::Ne: return " != ";
    }
    return "?";
}

void print(const Expr& e, std::ostream& os, int parent_prec) {
    int prec = precedence(e);
    bool paren = prec < parent_prec;
    if (paren) os << '(';
    switch (e.kind) {
        case Expr::Kind::IntLit:
            os << e.value;
            break;
        case Expr::Kind::BoolLit:
            os << (e.value ? "true" : "false");
            break;
        case Expr::Kind::Name:
            os << e.name;
            break;
        case Expr::Kind::Index:
            os << e.name;
            for (const auto& i : e.args) {
                os << '[';
                print(*i, os, 0);
                os << ']';
            }
            break;
        case Expr::Kind::Unary:
            os << (e.un == UnOp::Not ? "!" : "-");
            print(*e.args[0], os, prec + 1);
            break;
        case Expr::Kind::Binary:
            // Chains of the same associative operator print without parens.
            print(*e.args[0], os, prec);
            os << op_text(e.bin);
            print(*e.args[1], os, prec + 1);
            break;
        case Expr::Kind::Call:
            os << e.name << '(';
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) os << ", ";
                print(*e.args[i], os, 0);
            }
            os << ')';
            break;
    }
    if (paren) os << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(e, os, 0);
    return os.str();
}

std::string to_string(const ExprPtr& e) {
    if (!e) return "true";
    return to_string(*e);
}

std::string to_string(const LValue& lv) {
    std::ostringstream os;
    os << lv.name;
    for (const auto& i : lv.indices) os << '[' << to_string(i) << ']';
    return os.str();
}

// -- function statements ---------------------------------------------------

FuncStmt FuncStmt::assign(LValue lv, ExprPtr e) {
    FuncStmt s;
    s.kind = Kind::Assign;
    s.lhs = std::move(lv);
    s.rhs = std::move(e);
    return s;
}

FuncStmt FuncStmt::if_stmt(ExprPtr c, FuncBody then_b, FuncBody else_b) {
    FuncStmt s;
    s.kind = Kind::If;
    s.cond = std::move(c);
    s.then_body = std::move(then_b);
    s.else_body = std::move(else_b);
    return s;
}

FuncStmt FuncStmt::for_stmt(std::string v, ExprPtr lo, ExprPtr hi, FuncBody body) {
    FuncStmt s;
    s.kind = Kind::For;
    s.var = std::move(v);
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    s.then_body = std::move(body);
    return s;
}

FuncStmt FuncStmt::ret(ExprPtr value) {
    FuncStmt s;
    s.kind = Kind::Return;
    s.cond = std::move(value);
    return s;
}

FuncStmt FuncStmt::local(std::string n, ExprPtr init) {
    FuncStmt s;
    s.kind = Kind::Local;
    s.var = std::move(n);
    s.init = std::move(init);
    return s;
}

FuncStmt FuncStmt::call_stmt(std::string fn, std::vector<ExprPtr> args) {
    FuncStmt s;
    s.kind = Kind::CallStmt;
    s.rhs = Expr::call(std::move(fn), std::move(args));
    return s;
}

namespace {

void print_body(const FuncBody& b, std::ostream& os, int indent);

void print_stmt(const FuncStmt& s, std::ostream& os, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    switch (s.kind) {
        case FuncStmt::Kind::Assign:
            os << pad << to_string(s.lhs) << " = " << to_string(s.rhs) << ";\n";
            break;
        case FuncStmt::Kind::If:
            os << pad << "if (" << to_string(s.cond) << ") {\n";
            print_body(s.then_body, os, indent + 1);
            if (!s.else_body.stmts.empty()) {
                os << pad << "} else {\n";
                print_body(s.else_body, os, indent + 1);
            }
            os << pad << "}\n";
            break;
        case FuncStmt::Kind::For:
            os << pad << "for (" << s.var << " = " << to_string(s.lo) << "; " << s.var
               << " <= " << to_string(s.hi) << "; " << s.var << "++) {\n";
            print_body(s.then_body, os, indent + 1);
            os << pad << "}\n";
            break;
        case FuncStmt::Kind::Return:
            if (s.cond)
                os << pad << "return " << to_string(s.cond) << ";\n";
            else
                os << pad << "return;\n";
            break;
        case FuncStmt::Kind::Local:
            os << pad << "int " << s.var;
            if (s.init) os << " = " << to_string(s.init);
            os << ";\n";
            break;
        case FuncStmt::Kind::CallStmt:
            os << pad << to_string(s.rhs) << ";\n";
            break;
    }
}

void print_body(const FuncBody& b, std::ostream& os, int indent) {
    for (const auto& s : b.stmts) print_stmt(s, os, indent);
}

void collect_for_vars(const FuncBody& b, std::vector<std::string>& out) {
    for (const auto& s : b.stmts) {
        if (s.kind == FuncStmt::Kind::For) {
            out.push_back(s.var);
            collect_for_vars(s.then_body, out);
        } else if (s.kind == FuncStmt::Kind::If) {
            collect_for_vars(s.then_body, out);
            collect_for_vars(s.else_body, out);
        }
    }
}

}  // namespace

std::string to_string(const FuncDef& f) {
    std::ostringstream os;
    switch (f.ret) {
        case FuncDef::Ret::Void: os << "void "; break;
        case FuncDef::Ret::Int: os << "int "; break;
        case FuncDef::Ret::Bool: os << "bool "; break;
    }
    os << f.name << " (";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (i) os << ", ";
        os << "int " << f.params[i];
    }
    os << ") {\n";
    // Loop counters are declared up front, C89-style, which every checker
    // version accepts.
    std::vector<std::string> fors;
    collect_for_vars(f.body, fors);
    for (const auto& v : fors) os << "  int " << v << ";\n";
    print_body(f.body, os, 1);
    os << "}\n";
    return os.str();
}

// -- evaluation --------------------------------------------------------------

namespace {

std::optional<long> eval_impl(const Expr& e, const EvalEnv& env, EvalError* err) {
    auto fail = [&](std::string msg) -> std::optional<long> {
        if (err && err->message.empty()) err->message = std::move(msg);
        return std::nullopt;
    };
    switch (e.kind) {
        case Expr::Kind::IntLit:
        case Expr::Kind::BoolLit:
            return e.value;
        case Expr::Kind::Name: {
            if (env.name_lookup) {
                if (auto v = env.name_lookup(e.name)) return v;
            }
            return fail("unknown name '" + e.name + "'");
        }
        case Expr::Kind::Index: {
            std::vector<long> idx;
            idx.reserve(e.args.size());
            for (const auto& a : e.args) {
                auto v = eval_impl(*a, env, err);
                if (!v) return std::nullopt;
                idx.push_back(*v);
            }
            if (env.index_lookup) {
                if (auto v = env.index_lookup(e.name, idx)) return v;
            }
            return fail("unknown array '" + e.name + "'");
        }
        case Expr::Kind::Unary: {
            auto v = eval_impl(*e.args[0], env, err);
            if (!v) return std::nullopt;
            return e.un == UnOp::Not ? (*v ? 0 : 1) : -*v;
        }
        case Expr::Kind::Binary: {
            // Short-circuit the boolean connectives.
            if (e.bin == BinOp::And || e.bin == BinOp::Or) {
                auto l = eval_impl(*e.args[0], env, err);
                if (!l) return std::nullopt;
                if (e.bin == BinOp::And && !*l) return 0;
                if (e.bin == BinOp::Or && *l) return 1;
                auto r = eval_impl(*e.args[1], env, err);
                if (!r) return std::nullopt;
                return *r ? 1 : 0;
            }
            auto l = eval_impl(*e.args[0], env, err);
            auto r = eval_impl(*e.args[1], env, err);
            if (!l || !r) return std::nullopt;
            switch (e.bin) {
                case BinOp::Add: return *l + *r;
                case BinOp::Sub: return *l - *r;
                case BinOp::Lt: return *l < *r;
                case BinOp::Le: return *l <= *r;
                case BinOp::Gt: return *l > *r;
                case BinOp::Ge: return *l >= *r;
                case BinOp::Eq: return *l == *r;
                case BinOp::Ne: return *l != *r;
                default: return std::nullopt;
            }
        }
        case Expr::Kind::Call: {
            std::vector<long> args;
            args.reserve(e.args.size());
            for (const auto& a : e.args) {
                auto v = eval_impl(*a, env, err);
                if (!v) return std::nullopt;
                args.push_back(*v);
            }
            if (env.call) {
                if (auto v = env.call(e.name, args)) return v;
            }
            return fail("unknown function '" + e.name + "'");
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<long> eval(const Expr& e, const EvalEnv& env, EvalError* err) {
    return eval_impl(e, env, err);
}

std::optional<long> fold_constant(
    const ExprPtr& e, const std::function<std::optional<long>(const std::string&)>& consts) {
    if (!e) return std::nullopt;
    EvalEnv env;
    env.name_lookup = consts;
    return eval(*e, env);
}

void collect_names(const ExprPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    if (e->kind == Expr::Kind::Name || e->kind == Expr::Kind::Index) out.push_back(e->name);
    for (const auto& a : e->args) collect_names(a, out);
}

}  // namespace creol2ta::ta
