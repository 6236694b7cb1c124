#include <algorithm>
#include <map>
#include <set>

#include "creol2ta/creol/printer.hpp"
#include "creol2ta/xlate/translate.hpp"

namespace creol2ta::xlate {

using creol::ClassDecl;
using creol::MethodDecl;
using creol::Stmt;
using creol::StmtSeq;
using ta::ClockAtom;
using ta::ClockRef;
using ta::Edge;
using ta::Expr;
using ta::ExprPtr;
using ta::Guard;
using ta::Rel;
using ta::Sync;
using ta::TemplateBuilder;
using ta::UpdateItem;
using ta::Urgency;

const TaskInfo* TaskTable::find(const std::string& name) const {
    for (const auto& t : tasks)
        if (t.name == name) return &t;
    return nullptr;
}
int TaskTable::task_id(const std::string& name) const {
    const TaskInfo* t = find(name);
    return t ? t->id : -1;
}
int TaskTable::label_id(const std::string& name) const {
    for (const auto& [n, id] : labels)
        if (n == name) return id;
    return -1;
}
int TaskTable::remote_id(const std::string& name) const {
    for (const auto& [n, id] : remote_methods)
        if (n == name) return id;
    return -1;
}

const LocEntry* LocMap::find(const std::string& tmpl, int loc_id) const {
    for (const auto& e : entries)
        if (e.template_name == tmpl && e.loc_id == loc_id) return &e;
    return nullptr;
}
std::vector<const LocEntry*> LocMap::at_line(int line) const {
    std::vector<const LocEntry*> out;
    for (const auto& e : entries)
        if (e.line == line) out.push_back(&e);
    return out;
}
std::vector<const LocEntry*> LocMap::at_line(const std::string& tmpl, int line) const {
    std::vector<const LocEntry*> out;
    for (const auto& e : entries)
        if (e.template_name == tmpl && e.line == line) out.push_back(&e);
    return out;
}

HelperSets collect_helpers(const ClassDecl& cls) {
    HelperSets hs;
    std::set<std::string> seen_label, seen_method;
    for (const auto& m : cls.methods) {
        std::vector<std::string> ls, ms;
        creol::collect_labels(m.body, ls);
        creol::collect_methods(m.body, ms);
        for (auto& l : ls)
            if (seen_label.insert(l).second) hs.labels.push_back(l);
        for (auto& mm : ms)
            if (seen_method.insert(mm).second) hs.methods.push_back(mm);
    }
    // tasks = declared methods + subtasks; subtask names are derived during
    // translation, so here we pre-compute them the same way: one fresh name
    // per release point, in source order.
    for (const auto& m : cls.methods) {
        hs.tasks.push_back(m.name);
        int ordinal = 0;
        std::function<void(const StmtSeq&)> walk = [&](const StmtSeq& seq) {
            for (const auto& s : seq) {
                if (s->kind == Stmt::Kind::Await || s->kind == Stmt::Kind::Release)
                    hs.tasks.push_back(m.name + std::to_string(++ordinal));
                else if (s->kind == Stmt::Kind::While)
                    walk(s->body);
                else if (s->kind == Stmt::Kind::If) {
                    walk(s->body);
                    walk(s->else_body);
                }
            }
        };
        walk(m.body);
    }
    std::set<std::string> task_set(hs.tasks.begin(), hs.tasks.end());
    for (const auto& m : hs.methods)
        if (!task_set.count(m)) hs.remote_methods.push_back(m);
    return hs;
}

namespace {

constexpr const char* kClock = "c";

struct MethodCtx {
    const ClassDecl& cls;
    const AbstractionPolicy& policy;
    const DeadlineRange& deadlines;
    TaskTable& table;
    LocMap& locmap;
    DiagnosticList& diags;
    std::string file;

    TemplateBuilder* b = nullptr;
    std::string tmpl_name;
    std::string method;
    int l0 = -1, u = -1;
    int subtask_ordinal = 0;
    std::map<std::string, int> name_use;  // location-name disambiguation

    ExprPtr self() const { return Expr::var("self"); }

    int new_stmt_location(const Stmt& s) {
        std::string base = "L" + std::to_string(s.loc.line);
        int& n = name_use[base];
        std::string name = n == 0 ? base : base + "_" + std::to_string(n + 1);
        ++n;
        int id = b->add_location(name, Urgency::Normal);
        locmap.entries.push_back(
            {tmpl_name, id, name, s.loc.line, creol::print_stmt_inline(s)});
        return id;
    }

    void invariant_upper(int loc, long w) {
        b->add_invariant_atom(
            loc, ClockAtom::simple(ClockRef::scalar(kClock), Rel::Le, Expr::int_lit(w)));
    }

    Guard clock_ge(long best) const {
        Guard g;
        if (best > 0)
            g.atoms.push_back(
                ClockAtom::simple(ClockRef::scalar(kClock), Rel::Ge, Expr::int_lit(best)));
        return g;
    }

    std::string fresh_subtask(SourceLoc loc) {
        std::string name = method + std::to_string(++subtask_ordinal);
        if (cls.find_method(name)) {
            diags.error(loc, "generated subtask name '" + name +
                                 "' collides with a declared method", file);
        }
        return name;
    }

    void check_deadline_range(long d, SourceLoc loc) {
        if (d < deadlines.min || d > deadlines.max)
            diags.error(loc, "deadline " + std::to_string(d) + " outside configured range [" +
                                 std::to_string(deadlines.min) + "," +
                                 std::to_string(deadlines.max) + "]", file);
    }
};

// Call edge: invoke[label][method][receiver][self]! with deadline handoff.
void emit_call(MethodCtx& ctx, const Stmt& s, int a, int e) {
    Edge& edge = ctx.b->add_edge(a, e);
    edge.guard = ctx.clock_ge(s.ann.best);

    ExprPtr label_idx = s.label.empty() ? Expr::int_lit(0) : Expr::var(s.label);
    ExprPtr method_idx;
    bool self_call = s.target.empty() || s.target == "self";
    if (ctx.cls.find_method(s.method)) {
        method_idx = Expr::var(TaskTable::task_const(s.method));
    } else {
        method_idx = Expr::var(s.method);  // remote method constant
        if (self_call)
            ctx.diags.error(s.loc, "self call to undeclared method '" + s.method + "'",
                            ctx.file);
    }
    ExprPtr receiver = self_call ? ctx.self() : Expr::var(s.target);

    edge.sync = Sync{"invoke", {label_idx, method_idx, receiver, ctx.self()}, true};
    long d = s.ann.deadline.value_or(ctx.deadlines.init);
    ctx.check_deadline_range(d, s.loc);
    edge.updates.push_back(
        UpdateItem::assign(ta::LValue{"deadline", {}}, Expr::int_lit(d)));
    edge.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
    edge.note = "call " + (s.label.empty() ? std::string("") : s.label + "!") + s.method;
    ctx.invariant_upper(a, s.ann.worst);
}

void translate_seq(MethodCtx& ctx, const StmtSeq& seq, int a, int e);
ExprPtr abs_bool_guard(MethodCtx& ctx, const ExprPtr& cond, bool negated);

void translate_stmt(MethodCtx& ctx, const Stmt& s, int a, int e) {
    switch (s.kind) {
        case Stmt::Kind::Skip: {
            Edge& edge = ctx.b->add_edge(a, e);
            edge.guard = ctx.clock_ge(s.ann.best);
            edge.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            edge.note = "skip";
            ctx.invariant_upper(a, s.ann.worst);
            break;
        }
        case Stmt::Kind::Assign: {
            Edge& edge = ctx.b->add_edge(a, e);
            edge.guard = ctx.clock_ge(s.ann.best);
            if (!ctx.policy.is_dropped(s.var)) {
                bool bad = false;
                ExprPtr rhs = abs_expr(s.expr, ctx.policy, ctx.cls, &bad);
                if (bad) {
                    ctx.diags.error(s.loc,
                                    "assignment to kept variable '" + s.var +
                                        "' reads a dropped variable", ctx.file);
                }
                edge.updates.push_back(UpdateItem::assign(
                    ta::LValue{s.var, {ctx.self()}}, rhs));
            }
            edge.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            edge.note = "assign " + s.var;
            ctx.invariant_upper(a, s.ann.worst);
            break;
        }
        case Stmt::Kind::AsyncCall:
            emit_call(ctx, s, a, e);
            break;
        case Stmt::Kind::BlockingReply: {
            // wait! hands control to the scheduler; resume? re-enters.
            Edge& wait_edge = ctx.b->add_edge(a, ctx.l0);
            wait_edge.guard = ctx.clock_ge(s.ann.best);
            wait_edge.sync = Sync{"wait", {Expr::var(s.label), ctx.self()}, true};
            wait_edge.note = "wait " + s.label + "?";
            Edge& resume_edge = ctx.b->add_edge(ctx.l0, e);
            resume_edge.sync = Sync{"resume", {Expr::var(s.label), ctx.self()}, false};
            resume_edge.updates.push_back(UpdateItem::assign(
                ta::LValue{"labels", {Expr::var(s.label), ctx.self()}}, Expr::bool_lit(false)));
            resume_edge.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            resume_edge.note = "resume " + s.label + "?";
            // Only a lower bound is expressible: dwell exactly `best`, the
            // waiting time accrues at the initial location.
            ctx.invariant_upper(a, s.ann.best);
            break;
        }
        case Stmt::Kind::Release: {
            std::string sub = ctx.fresh_subtask(s.loc);
            ctx.table.tasks.push_back(
                {sub, static_cast<int>(ctx.table.tasks.size()), false, ctx.method, nullptr,
                 nullptr});
            Edge& del = ctx.b->add_edge(a, ctx.u);
            del.guard = ctx.clock_ge(s.ann.best);
            del.sync = Sync{"delegate", {Expr::var(TaskTable::task_const(sub)), ctx.self()}, true};
            del.updates.push_back(UpdateItem::assign(ta::LValue{"complete", {ctx.self()}},
                                                     Expr::bool_lit(false)));
            del.note = "release -> " + sub;
            Edge& entry = ctx.b->add_edge(ctx.l0, e);
            entry.sync = Sync{"start", {Expr::var(TaskTable::task_const(sub)), ctx.self()}, false};
            entry.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            entry.note = "start subtask " + sub;
            ctx.invariant_upper(a, s.ann.worst);
            break;
        }
        case Stmt::Kind::Await: {
            std::string sub = ctx.fresh_subtask(s.loc);
            ExprPtr enabler = abs_guard(s.guard, false, ctx.policy, ctx.cls, ctx.table);
            ExprPtr blocked = abs_guard(s.guard, true, ctx.policy, ctx.cls, ctx.table);
            ctx.table.tasks.push_back({sub, static_cast<int>(ctx.table.tasks.size()), false,
                                       ctx.method, s.guard, enabler});
            // pass-through when the guard holds
            Edge& pass = ctx.b->add_edge(a, e);
            pass.guard = ctx.clock_ge(s.ann.best);
            if (!ta::is_true_literal(enabler)) pass.guard.discrete = enabler;
            for (auto& r : label_reset(s.guard, ctx.table)) pass.updates.push_back(r);
            pass.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            pass.note = "await holds";
            // delegate the continuation otherwise
            Edge& del = ctx.b->add_edge(a, ctx.u);
            del.guard = ctx.clock_ge(s.ann.best);
            if (!ta::is_true_literal(blocked)) del.guard.discrete = blocked;
            del.sync = Sync{"delegate", {Expr::var(TaskTable::task_const(sub)), ctx.self()}, true};
            del.updates.push_back(UpdateItem::assign(ta::LValue{"complete", {ctx.self()}},
                                                     Expr::bool_lit(false)));
            del.note = "await fails -> " + sub;
            Edge& entry = ctx.b->add_edge(ctx.l0, e);
            entry.sync = Sync{"start", {Expr::var(TaskTable::task_const(sub)), ctx.self()}, false};
            entry.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            entry.note = "start subtask " + sub;
            ctx.invariant_upper(a, s.ann.worst);
            break;
        }
        case Stmt::Kind::If: {
            int l1, l2;
            if (s.body.empty() || s.else_body.empty()) {
                ctx.diags.error(s.loc, "if branches must be non-empty", ctx.file);
                return;
            }
            l1 = ctx.new_stmt_location(*s.body.front());
            l2 = ctx.new_stmt_location(*s.else_body.front());
            ExprPtr then_g = abs_bool_guard(ctx, s.expr, false);
            ExprPtr else_g = abs_bool_guard(ctx, s.expr, true);
            Edge& te = ctx.b->add_edge(a, l1);
            te.guard = ctx.clock_ge(s.ann.best);
            if (!ta::is_true_literal(then_g)) te.guard.discrete = then_g;
            te.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            te.note = "if";
            Edge& ee = ctx.b->add_edge(a, l2);
            ee.guard = ctx.clock_ge(s.ann.best);
            if (!ta::is_true_literal(else_g)) ee.guard.discrete = else_g;
            ee.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            ee.note = "else";
            ctx.invariant_upper(a, s.ann.worst);
            translate_seq(ctx, s.body, l1, e);
            translate_seq(ctx, s.else_body, l2, e);
            break;
        }
        case Stmt::Kind::While: {
            if (s.body.empty()) {
                ctx.diags.error(s.loc, "while body must be non-empty", ctx.file);
                return;
            }
            int l = ctx.new_stmt_location(*s.body.front());
            ExprPtr cont_g = abs_bool_guard(ctx, s.expr, false);
            ExprPtr exit_g = abs_bool_guard(ctx, s.expr, true);
            Edge& ce = ctx.b->add_edge(a, l);
            ce.guard = ctx.clock_ge(s.ann.best);
            if (!ta::is_true_literal(cont_g)) ce.guard.discrete = cont_g;
            ce.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            ce.note = "while";
            Edge& xe = ctx.b->add_edge(a, e);
            xe.guard = ctx.clock_ge(s.ann.best);
            if (!ta::is_true_literal(exit_g)) xe.guard.discrete = exit_g;
            xe.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
            xe.note = "od";
            ctx.invariant_upper(a, s.ann.worst);
            translate_seq(ctx, s.body, l, a);
            break;
        }
    }
}

ExprPtr abs_bool_guard(MethodCtx& ctx, const ExprPtr& cond, bool negated) {
    auto g = creol::Guard::bool_expr(cond);
    return abs_guard(g, negated, ctx.policy, ctx.cls, ctx.table);
}

void translate_seq(MethodCtx& ctx, const StmtSeq& seq, int a, int e) {
    int cur = a;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        int next = (i + 1 == seq.size()) ? e : ctx.new_stmt_location(*seq[i + 1]);
        translate_stmt(ctx, *seq[i], cur, next);
        cur = next;
    }
}

ta::Template translate_method(const ClassDecl& cls, const MethodDecl& m,
                              const AbstractionPolicy& policy, const DeadlineRange& deadlines,
                              TaskTable& table, LocMap& locmap, DiagnosticList& diags,
                              const std::string& file) {
    TemplateBuilder b(cls.name + "_" + m.name);
    for (const auto& [p, t] : cls.params) {
        (void)t;
        b.arg(p);
    }
    b.arg("self");

    MethodCtx ctx{cls, policy, deadlines, table, locmap, diags, file};
    ctx.b = &b;
    ctx.tmpl_name = cls.name + "_" + m.name;
    ctx.method = m.name;

    ctx.l0 = b.add_location("l0", Urgency::Normal);
    b.set_initial(ctx.l0);
    if (m.body.empty()) {
        diags.error(m.loc, "method '" + m.name + "' has an empty body", file);
        return b.finalize();
    }
    int a = ctx.new_stmt_location(*m.body.front());
    ctx.u = b.add_location("U", Urgency::Urgent);

    table.tasks.push_back(
        {m.name, static_cast<int>(table.tasks.size()), true, m.name, nullptr, nullptr});

    Edge& start = b.add_edge(ctx.l0, a);
    start.sync = Sync{"start", {Expr::var(TaskTable::task_const(m.name)), ctx.self()}, false};
    start.updates.push_back(UpdateItem::reset(ClockRef::scalar(kClock)));
    start.note = "start " + m.name;
    Edge& finish = b.add_edge(ctx.u, ctx.l0);
    finish.sync = Sync{"finish", {ctx.self()}, true};
    finish.note = "finish";

    translate_seq(ctx, m.body, a, ctx.u);
    return b.finalize();
}

}  // namespace

TranslationResult translate_class(const ClassDecl& cls, const AbstractionPolicy& policy,
                                  DeadlineRange deadlines, DiagnosticList& diags,
                                  const std::string& file) {
    TranslationResult res;
    res.class_name = cls.name;
    res.n_obj = static_cast<int>(cls.params.size()) + 1;
    res.deadlines = deadlines;

    // policy sanity: every class variable in exactly one set
    for (const auto& [v, is_bool] : cls.vars) {
        (void)is_bool;
        bool kept = policy.find_kept(v) != nullptr;
        bool dropped = policy.is_dropped(v);
        if (kept == dropped)
            diags.error({}, "abstraction policy must list variable '" + v +
                                "' in exactly one of keep/drop", file);
    }
    for (const auto& k : policy.keep)
        if (!cls.has_var(k.name))
            diags.error({}, "abstraction policy keeps unknown variable '" + k.name + "'", file);
    for (const auto& d : policy.drop)
        if (!cls.has_var(d))
            diags.error({}, "abstraction policy drops unknown variable '" + d + "'", file);
    if (deadlines.min > deadlines.max || deadlines.init < deadlines.min ||
        deadlines.init > deadlines.max)
        diags.error({}, "invalid deadline range", file);
    if (diags.has_errors()) return res;

    HelperSets hs = collect_helpers(cls);

    // labels first: ids from 1 in source order
    int next_label = 1;
    for (const auto& l : hs.labels) res.table.labels.emplace_back(l, next_label++);
    int next_remote = 0;
    for (const auto& r : hs.remote_methods)
        res.table.remote_methods.emplace_back(r, next_remote++);

    for (const auto& m : cls.methods) {
        res.templates.push_back(translate_method(cls, m, policy, deadlines, res.table,
                                                 res.locmap, diags, file));
    }
    if (diags.has_errors()) return res;

    // enabler guards may not reach class parameters: isEnabled has no access
    for (const auto& t : res.table.tasks) {
        if (!t.enabler) continue;
        std::vector<std::string> names;
        ta::collect_names(t.enabler, names);
        for (const auto& n : names)
            if (cls.has_param(n))
                diags.error({}, "enabling condition of subtask '" + t.name +
                                    "' references class parameter '" + n + "'", file);
    }

    // ---- global declarations ----
    ta::Declarations& g = res.globals;
    long n_tasks = static_cast<long>(res.table.tasks.size());
    long n_remote = static_cast<long>(res.table.remote_methods.size());
    long msg = std::max(n_remote, n_tasks);
    g.add_constant("MSG", msg);
    g.add_constant("nObj", res.n_obj);
    g.add_constant("LBL", static_cast<long>(res.table.labels.size()));
    for (const auto& t : res.table.tasks) g.add_constant(TaskTable::task_const(t.name), t.id);
    for (const auto& [l, id] : res.table.labels) g.add_constant(l, id);
    for (const auto& [r, id] : res.table.remote_methods) g.add_constant(r, id);

    g.clocks.push_back({kClock, 0});

    ta::VarDecl deadline;
    deadline.name = "deadline";
    deadline.is_bool = false;
    deadline.lo = deadlines.min;
    deadline.hi = deadlines.max;
    deadline.init = {deadlines.init};
    deadline.meta = true;
    g.vars.push_back(deadline);

    ta::VarDecl labels;
    labels.name = "labels";
    labels.is_bool = true;
    labels.dims = {static_cast<int>(res.table.labels.size()) + 1, res.n_obj};
    g.vars.push_back(labels);

    for (const auto& [v, is_bool] : cls.vars) {
        if (policy.is_dropped(v)) continue;
        const auto* kept = policy.find_kept(v);
        ta::VarDecl vd;
        vd.name = v;
        vd.is_bool = is_bool;
        vd.lo = is_bool ? 0 : kept->lo;
        vd.hi = is_bool ? 1 : kept->hi;
        vd.dims = {res.n_obj};
        g.vars.push_back(vd);
    }

    ta::VarDecl complete;
    complete.name = "complete";
    complete.is_bool = true;
    complete.dims = {res.n_obj};
    complete.init.assign(static_cast<std::size_t>(res.n_obj), 1);  // true by default
    g.vars.push_back(complete);

    int msg1 = static_cast<int>(msg) + 1;
    int lbl1 = static_cast<int>(res.table.labels.size()) + 1;
    int n_obj = res.n_obj;
    g.channels.push_back({"delegate", {msg1, n_obj}, false});
    g.channels.push_back({"invoke", {lbl1, msg1, n_obj, n_obj}, false});
    g.channels.push_back({"start", {msg1, n_obj}, true});
    g.channels.push_back({"finish", {n_obj}, false});
    g.channels.push_back({"wait", {lbl1, n_obj}, false});
    g.channels.push_back({"resume", {lbl1, n_obj}, true});
    g.channels.push_back({"reply", {lbl1, n_obj}, false});

    // isEnabled(msg, self): subtask enablers, true otherwise
    ta::FuncDef is_enabled;
    is_enabled.name = "isEnabled";
    is_enabled.ret = ta::FuncDef::Ret::Bool;
    is_enabled.params = {"msg", "self"};
    for (const auto& t : res.table.tasks) {
        if (!t.enabler || ta::is_true_literal(t.enabler)) continue;
        ta::FuncBody then_b;
        then_b.stmts.push_back(ta::FuncStmt::ret(t.enabler));
        is_enabled.body.stmts.push_back(ta::FuncStmt::if_stmt(
            Expr::binary(ta::BinOp::Eq, Expr::var("msg"),
                         Expr::var(TaskTable::task_const(t.name))),
            std::move(then_b)));
    }
    is_enabled.body.stmts.push_back(ta::FuncStmt::ret(Expr::bool_lit(true)));
    g.functions.push_back(std::move(is_enabled));

    res.ok = !diags.has_errors();
    return res;
}

}  // namespace creol2ta::xlate
