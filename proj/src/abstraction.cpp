#include <algorithm>

#include "creol2ta/xlate/translate.hpp"

namespace creol2ta::xlate {

using creol::Guard;
using creol::GuardPtr;
using ta::BinOp;
using ta::Expr;
using ta::ExprPtr;
using ta::UnOp;

const AbstractionPolicy::Kept* AbstractionPolicy::find_kept(const std::string& n) const {
    for (const auto& k : keep)
        if (k.name == n) return &k;
    return nullptr;
}

bool AbstractionPolicy::is_dropped(const std::string& n) const {
    return std::find(drop.begin(), drop.end(), n) != drop.end();
}

AbstractionPolicy AbstractionPolicy::keep_all(const creol::ClassDecl& cls, long int_hi) {
    AbstractionPolicy p;
    for (const auto& [name, is_bool] : cls.vars)
        p.keep.push_back({name, 0, is_bool ? 1 : int_hi});
    return p;
}

namespace {

bool mentions_dropped_var(const ExprPtr& e, const AbstractionPolicy& policy,
                          const creol::ClassDecl& cls) {
    if (!e) return false;
    if (e->kind == Expr::Kind::Name && cls.has_var(e->name) && policy.is_dropped(e->name))
        return true;
    for (const auto& a : e->args)
        if (mentions_dropped_var(a, policy, cls)) return true;
    return false;
}

ExprPtr substitute(const ExprPtr& e, const creol::ClassDecl& cls) {
    if (!e) return e;
    if (e->kind == Expr::Kind::Name) {
        if (cls.has_var(e->name))
            return Expr::index(e->name, {Expr::var("self")});
        return e;  // class parameter, self, or a constant
    }
    if (e->args.empty()) return e;
    auto copy = std::make_shared<Expr>(*e);
    for (auto& a : copy->args) a = substitute(a, cls);
    return copy;
}

BinOp flip(BinOp op) {
    switch (op) {
        case BinOp::Lt: return BinOp::Ge;
        case BinOp::Le: return BinOp::Gt;
        case BinOp::Gt: return BinOp::Le;
        case BinOp::Ge: return BinOp::Lt;
        case BinOp::Eq: return BinOp::Ne;
        case BinOp::Ne: return BinOp::Eq;
        default: return op;
    }
}

// Negation-normal-form abstraction of a boolean expression. Atoms that
// mention a dropped variable collapse to true in either polarity.
ExprPtr abs_bool(const ExprPtr& e, bool neg, const AbstractionPolicy& policy,
                 const creol::ClassDecl& cls) {
    if (!e) return Expr::bool_lit(true);
    switch (e->kind) {
        case Expr::Kind::BoolLit:
        case Expr::Kind::IntLit:
            return Expr::bool_lit(neg ? e->value == 0 : e->value != 0);
        case Expr::Kind::Unary:
            if (e->un == UnOp::Not) return abs_bool(e->args[0], !neg, policy, cls);
            break;
        case Expr::Kind::Binary:
            switch (e->bin) {
                case BinOp::And:
                case BinOp::Or: {
                    bool is_and = (e->bin == BinOp::And) != neg;
                    ExprPtr l = abs_bool(e->args[0], neg, policy, cls);
                    ExprPtr r = abs_bool(e->args[1], neg, policy, cls);
                    if (ta::is_true_literal(l) && ta::is_true_literal(r))
                        return Expr::bool_lit(true);
                    if (is_and) {
                        if (ta::is_true_literal(l)) return r;
                        if (ta::is_true_literal(r)) return l;
                    }
                    return Expr::binary(is_and ? BinOp::And : BinOp::Or, l, r);
                }
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge:
                case BinOp::Eq:
                case BinOp::Ne: {
                    if (mentions_dropped_var(e, policy, cls)) return Expr::bool_lit(true);
                    auto sub = substitute(e, cls);
                    if (!neg) return sub;
                    return Expr::binary(flip(e->bin), sub->args[0], sub->args[1]);
                }
                default:
                    break;
            }
            break;
        default:
            break;
    }
    // Bare boolean atom (variable, or arithmetic read as a truth value).
    if (mentions_dropped_var(e, policy, cls)) return Expr::bool_lit(true);
    ExprPtr sub = substitute(e, cls);
    return neg ? Expr::unary(UnOp::Not, sub) : sub;
}

}  // namespace

ta::ExprPtr abs_expr(const ExprPtr& e, const AbstractionPolicy& policy,
                     const creol::ClassDecl& cls, bool* mentions_dropped) {
    if (mentions_dropped) *mentions_dropped = mentions_dropped_var(e, policy, cls);
    return substitute(e, cls);
}

ta::ExprPtr abs_guard(const GuardPtr& g, bool negated, const AbstractionPolicy& policy,
                      const creol::ClassDecl& cls, const TaskTable& table) {
    if (!g) return Expr::bool_lit(!negated);
    switch (g->kind) {
        case Guard::Kind::BoolExpr:
            return abs_bool(g->expr, negated, policy, cls);
        case Guard::Kind::ReplyTest: {
            ExprPtr atom = Expr::index("labels", {Expr::var(g->label), Expr::var("self")});
            (void)table;
            return negated ? Expr::unary(UnOp::Not, atom) : atom;
        }
        case Guard::Kind::Not:
            return abs_guard(g->a, !negated, policy, cls, table);
        case Guard::Kind::And: {
            ExprPtr l = abs_guard(g->a, negated, policy, cls, table);
            ExprPtr r = abs_guard(g->b, negated, policy, cls, table);
            bool is_and = !negated;
            if (ta::is_true_literal(l) && ta::is_true_literal(r)) return Expr::bool_lit(true);
            if (is_and) {
                if (ta::is_true_literal(l)) return r;
                if (ta::is_true_literal(r)) return l;
            }
            return Expr::binary(is_and ? BinOp::And : BinOp::Or, l, r);
        }
    }
    return Expr::bool_lit(true);
}

std::vector<ta::UpdateItem> label_reset(const GuardPtr& g, const TaskTable& table) {
    std::vector<std::string> tested;
    creol::collect_labels(g, tested);
    std::sort(tested.begin(), tested.end());
    tested.erase(std::unique(tested.begin(), tested.end()), tested.end());
    std::sort(tested.begin(), tested.end(), [&](const std::string& a, const std::string& b) {
        return table.label_id(a) < table.label_id(b);
    });
    std::vector<ta::UpdateItem> out;
    for (const auto& t : tested) {
        ta::LValue lv;
        lv.name = "labels";
        lv.indices = {Expr::var(t), Expr::var("self")};
        out.push_back(ta::UpdateItem::assign(std::move(lv), Expr::bool_lit(false)));
    }
    return out;
}

}  // namespace creol2ta::xlate
