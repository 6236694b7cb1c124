#include "creol2ta/creol/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace creol2ta::creol {

namespace {

// Walks a statement sequence tracking the minimum best-case time accumulated
// since the current activation started. Release points (await / release) and
// blocking replies start a fresh activation afterwards.
long walk_min_best(const StmtSeq& seq, long acc,
                   const std::function<void(const Stmt&, long)>& on_release) {
    for (const auto& s : seq) {
        switch (s->kind) {
            case Stmt::Kind::Await:
            case Stmt::Kind::Release:
                on_release(*s, acc + s->ann.best);
                acc = 0;  // continuation runs as a fresh subtask
                break;
            case Stmt::Kind::BlockingReply:
                acc = 0;  // resume passes through the initial location
                break;
            case Stmt::Kind::If: {
                long entry = acc + s->ann.best;
                long a = walk_min_best(s->body, entry, on_release);
                long b = walk_min_best(s->else_body, entry, on_release);
                acc = std::min(a, b);
                break;
            }
            case Stmt::Kind::While: {
                long entry = acc + s->ann.best;
                walk_min_best(s->body, entry, on_release);
                acc = entry;  // zero-iteration exit is the cheapest
                break;
            }
            default:
                acc += s->ann.best;
                break;
        }
    }
    return acc;
}

struct ExprCheck {
    const ClassDecl& cls;
    DiagnosticList& diags;
    const std::string& file;

    void check(const ta::ExprPtr& e, SourceLoc loc) const {
        if (!e) return;
        if (e->kind == ta::Expr::Kind::Name) {
            if (!cls.has_var(e->name) && !cls.has_param(e->name) && e->name != "self")
                diags.error(loc, "unknown identifier '" + e->name + "'", file);
        }
        if (e->kind == ta::Expr::Kind::Index || e->kind == ta::Expr::Kind::Call)
            diags.error(loc, "unsupported expression form '" + e->name + "'", file);
        for (const auto& a : e->args) check(a, loc);
    }
};

void check_guard(const GuardPtr& g, const std::set<std::string>& labels, const ExprCheck& ec,
                 DiagnosticList& diags, const std::string& file) {
    if (!g) return;
    switch (g->kind) {
        case Guard::Kind::BoolExpr:
            ec.check(g->expr, g->loc);
            break;
        case Guard::Kind::ReplyTest:
            if (!labels.count(g->label))
                diags.error(g->loc, "reply test on undeclared label '" + g->label + "'", file);
            break;
        case Guard::Kind::Not:
            check_guard(g->a, labels, ec, diags, file);
            break;
        case Guard::Kind::And:
            check_guard(g->a, labels, ec, diags, file);
            check_guard(g->b, labels, ec, diags, file);
            break;
    }
}

void check_stmts(const StmtSeq& seq, const ClassDecl& cls, const std::set<std::string>& labels,
                 DiagnosticList& diags, const std::string& file) {
    ExprCheck ec{cls, diags, file};
    for (const auto& s : seq) {
        if (s->ann.best > s->ann.worst) {
            if (s->kind == Stmt::Kind::BlockingReply) {
                // worst is ignored for blocking replies anyway
            } else {
                diags.error(s->loc, "best-case time exceeds worst-case time", file);
            }
        }
        if (s->ann.deadline && s->kind != Stmt::Kind::AsyncCall)
            diags.error(s->loc, "deadline annotation on a statement that is not a call", file);
        switch (s->kind) {
            case Stmt::Kind::AsyncCall:
                if (!s->ann.deadline)
                    diags.error(s->loc, "call missing deadline ('@d') annotation", file);
                break;
            case Stmt::Kind::BlockingReply:
                if (s->ann.worst != 0)
                    diags.warning(s->loc,
                                  "worst-case time on a blocking reply is ignored", file);
                if (!labels.count(s->label))
                    diags.error(s->loc, "blocking reply on undeclared label '" + s->label + "'",
                                file);
                break;
            case Stmt::Kind::Assign:
                if (!cls.has_var(s->var))
                    diags.error(s->loc, "assignment to unknown variable '" + s->var + "'", file);
                ec.check(s->expr, s->loc);
                break;
            case Stmt::Kind::Await:
                check_guard(s->guard, labels, ec, diags, file);
                break;
            case Stmt::Kind::While:
                ec.check(s->expr, s->loc);
                check_stmts(s->body, cls, labels, diags, file);
                break;
            case Stmt::Kind::If:
                ec.check(s->expr, s->loc);
                check_stmts(s->body, cls, labels, diags, file);
                check_stmts(s->else_body, cls, labels, diags, file);
                break;
            default:
                break;
        }
        if (s->kind == Stmt::Kind::AsyncCall && !s->target.empty() && s->target != "self") {
            if (!cls.has_param(s->target))
                diags.error(s->loc, "call target '" + s->target + "' is not a known object",
                            file);
        }
    }
}

}  // namespace

void min_best_to_release_points(const StmtSeq& body,
                                const std::function<void(const Stmt&, long)>& on_release_point) {
    walk_min_best(body, 0, on_release_point);
}

DiagnosticList validate(const SourceModel& model) {
    DiagnosticList diags;
    const std::string& file = model.file;

    std::set<std::string> iface_names;
    for (const auto& in : model.interfaces) {
        if (!iface_names.insert(in.name).second)
            diags.error(in.loc, "duplicate interface '" + in.name + "'", file);
        std::set<std::string> ops;
        for (const auto& op : in.ops)
            if (!ops.insert(op.name).second)
                diags.error(in.loc, "duplicate operation '" + op.name + "' in interface '" +
                                        in.name + "'", file);
        for (const auto& sup : in.inherits)
            if (!model.find_interface(sup))
                diags.error(in.loc, "interface '" + in.name + "' inherits undeclared '" + sup +
                                        "'", file);
    }

    for (const auto& cls : model.classes) {
        // implements resolution and conformance
        for (const auto& iname : cls.implements) {
            const InterfaceDecl* in = model.find_interface(iname);
            if (!in) {
                diags.error(cls.loc, "class '" + cls.name + "' implements undeclared interface '"
                                         + iname + "'", file);
                continue;
            }
            for (const auto& op : in->ops)
                if (!cls.find_method(op.name))
                    diags.error(cls.loc, "class '" + cls.name + "' does not define method '" +
                                             op.name + "' of interface '" + iname + "'", file);
        }

        // name uniqueness
        std::set<std::string> names;
        for (const auto& [p, t] : cls.params) {
            (void)t;
            if (!names.insert(p).second)
                diags.error(cls.loc, "duplicate class parameter '" + p + "'", file);
        }
        for (const auto& [v, b] : cls.vars) {
            (void)b;
            if (!names.insert(v).second)
                diags.error(cls.loc, "variable '" + v + "' clashes with another declaration",
                            file);
        }
        std::set<std::string> methods;
        for (const auto& m : cls.methods) {
            if (!methods.insert(m.name).second)
                diags.error(m.loc, "duplicate method '" + m.name + "'", file);
            if (names.count(m.name))
                diags.error(m.loc, "method '" + m.name + "' clashes with a variable or parameter",
                            file);
        }

        // label uniqueness across the class; labels also get exported
        // constants, so they must not clash with other names.
        std::map<std::string, int> label_count;
        std::set<std::string> labels;
        for (const auto& m : cls.methods) {
            std::vector<std::string> ls;
            collect_labels(m.body, ls);
            for (const auto& l : ls) {
                ++label_count[l];
                labels.insert(l);
            }
        }
        for (const auto& [l, n] : label_count) {
            if (n > 1)
                diags.error(cls.loc, "label '" + l + "' is declared by more than one call",
                            file);
            if (names.count(l) || methods.count(l))
                diags.error(cls.loc, "label '" + l + "' clashes with another declaration", file);
        }

        for (const auto& m : cls.methods) {
            check_stmts(m.body, cls, labels, diags, file);
            min_best_to_release_points(m.body, [&](const Stmt& s, long min_best) {
                if (min_best == 0)
                    diags.warning(s.loc,
                                  "release point reachable with zero best-case execution time "
                                  "since activation",
                                  file);
            });
        }
    }
    return diags;
}

}  // namespace creol2ta::creol
