#include <algorithm>

#include "creol2ta/sched/scheduler.hpp"

namespace creol2ta::sched {

using ta::ClockAtom;
using ta::ClockRef;
using ta::Edge;
using ta::Expr;
using ta::ExprPtr;
using ta::FuncBody;
using ta::FuncDef;
using ta::FuncStmt;
using ta::LValue;
using ta::Rel;
using ta::Sync;
using ta::TemplateBuilder;
using ta::UpdateItem;
using ta::Urgency;
using xlate::TaskTable;

namespace {

ExprPtr num(long v) { return Expr::int_lit(v); }
ExprPtr name(const std::string& n) { return Expr::var(n); }
ExprPtr idx(const std::string& base, ExprPtr i) { return Expr::index(base, {std::move(i)}); }
ExprPtr idx2(const std::string& base, ExprPtr i, ExprPtr j) {
    return Expr::index(base, {std::move(i), std::move(j)});
}
ExprPtr bin(ta::BinOp op, ExprPtr l, ExprPtr r) {
    return Expr::binary(op, std::move(l), std::move(r));
}
ExprPtr band(ExprPtr l, ExprPtr r) { return Expr::and_of(std::move(l), std::move(r)); }
ExprPtr bor(ExprPtr l, ExprPtr r) {
    return Expr::binary(ta::BinOp::Or, std::move(l), std::move(r));
}
ExprPtr eq(ExprPtr l, ExprPtr r) { return bin(ta::BinOp::Eq, std::move(l), std::move(r)); }
ExprPtr ne(ExprPtr l, ExprPtr r) { return bin(ta::BinOp::Ne, std::move(l), std::move(r)); }
ExprPtr lt(ExprPtr l, ExprPtr r) { return bin(ta::BinOp::Lt, std::move(l), std::move(r)); }
ExprPtr gt(ExprPtr l, ExprPtr r) { return bin(ta::BinOp::Gt, std::move(l), std::move(r)); }
ExprPtr ge(ExprPtr l, ExprPtr r) { return bin(ta::BinOp::Ge, std::move(l), std::move(r)); }
ExprPtr notE(ExprPtr e) { return Expr::unary(ta::UnOp::Not, std::move(e)); }
ExprPtr callE(const std::string& fn, std::vector<ExprPtr> args) {
    return Expr::call(fn, std::move(args));
}
LValue lv(const std::string& n, std::vector<ExprPtr> indices = {}) {
    return LValue{n, std::move(indices)};
}
FuncStmt assign(LValue l, ExprPtr r) { return FuncStmt::assign(std::move(l), std::move(r)); }
ExprPtr max_minus(long k) { return bin(ta::BinOp::Sub, name("MAX"), num(k)); }

// ---- local function bodies. The published scheduler figure omits them; these
// ---- are minimal reconstructions consistent with its prose description.

FuncDef fn_find_free_clock() {
    FuncDef f;
    f.name = "findFreeClock";
    f.ret = FuncDef::Ret::Int;
    FuncBody hit;
    hit.stmts.push_back(assign(lv("f"), name("i")));
    hit.stmts.push_back(assign(lv("done"), num(1)));
    FuncBody loop;
    loop.stmts.push_back(FuncStmt::if_stmt(
        band(eq(name("done"), num(0)), eq(idx("counter", name("i")), num(0))), std::move(hit)));
    f.body.stmts.push_back(FuncStmt::local("f", num(0)));
    f.body.stmts.push_back(FuncStmt::local("done", num(0)));
    f.body.stmts.push_back(FuncStmt::for_stmt("i", num(0), max_minus(1), std::move(loop)));
    f.body.stmts.push_back(FuncStmt::ret(name("f")));
    return f;
}

FuncDef fn_insert_invoke() {
    FuncDef f;
    f.name = "insertInvoke";
    f.ret = FuncDef::Ret::Void;
    f.params = {"msg", "sender", "l"};
    f.body.stmts.push_back(FuncStmt::local("fc", callE("findFreeClock", {})));
    f.body.stmts.push_back(assign(lv("q", {name("tail")}), name("msg")));
    f.body.stmts.push_back(assign(lv("s", {name("tail")}), name("sender")));
    f.body.stmts.push_back(assign(lv("lbl", {name("tail")}), name("l")));
    f.body.stmts.push_back(assign(lv("caller", {name("tail")}), name("NONE")));
    f.body.stmts.push_back(assign(lv("ca", {name("tail")}), name("fc")));
    f.body.stmts.push_back(assign(lv("counter", {name("fc")}), num(1)));
    f.body.stmts.push_back(assign(lv("d", {name("fc")}), name("deadline")));
    f.body.stmts.push_back(assign(lv("tail"), bin(ta::BinOp::Add, name("tail"), num(1))));
    return f;
}

FuncDef fn_insert_delegate() {
    // The subtask inherits sender, label, caller pointer and the parent's
    // deadline clock (sharing counted in `counter`).
    FuncDef f;
    f.name = "insertDelegate";
    f.ret = FuncDef::Ret::Void;
    f.params = {"msg"};
    f.body.stmts.push_back(assign(lv("q", {name("tail")}), name("msg")));
    f.body.stmts.push_back(assign(lv("s", {name("tail")}), idx("s", name("run"))));
    f.body.stmts.push_back(assign(lv("lbl", {name("tail")}), idx("lbl", name("run"))));
    f.body.stmts.push_back(assign(lv("caller", {name("tail")}), idx("caller", name("run"))));
    f.body.stmts.push_back(assign(lv("ca", {name("tail")}), idx("ca", name("run"))));
    f.body.stmts.push_back(
        assign(lv("counter", {idx("ca", name("run"))}),
               bin(ta::BinOp::Add, idx("counter", idx("ca", name("run"))), num(1))));
    f.body.stmts.push_back(assign(lv("tail"), bin(ta::BinOp::Add, name("tail"), num(1))));
    return f;
}

FuncDef fn_is_blocked() {
    // A task is blocked while some queue entry names it as the caller of a
    // pending synchronous call; blocked tasks must not be (re)started.
    FuncDef f;
    f.name = "isBlocked";
    f.ret = FuncDef::Ret::Bool;
    f.params = {"i"};
    FuncBody hit;
    hit.stmts.push_back(assign(lv("blk"), num(1)));
    FuncBody loop;
    loop.stmts.push_back(FuncStmt::if_stmt(
        band(lt(name("k"), name("tail")), eq(idx("caller", name("k")), name("i"))),
        std::move(hit)));
    f.body.stmts.push_back(FuncStmt::local("blk", num(0)));
    f.body.stmts.push_back(FuncStmt::for_stmt("k", num(0), max_minus(1), std::move(loop)));
    f.body.stmts.push_back(FuncStmt::ret(eq(name("blk"), num(1))));
    return f;
}

FuncDef fn_can_select() {
    FuncDef f;
    f.name = "canSelect";
    f.ret = FuncDef::Ret::Bool;
    f.params = {"i"};
    f.body.stmts.push_back(FuncStmt::ret(
        band(band(band(lt(name("i"), name("tail")), ne(name("i"), name("run"))),
                  notE(callE("isBlocked", {name("i")}))),
             callE("isEnabled", {idx("q", name("i")), name("self")}))));
    return f;
}

FuncDef fn_none_selectable() {
    FuncDef f;
    f.name = "noneSelectable";
    f.ret = FuncDef::Ret::Bool;
    FuncBody hit;
    hit.stmts.push_back(assign(lv("any"), num(1)));
    FuncBody loop;
    loop.stmts.push_back(FuncStmt::if_stmt(callE("canSelect", {name("k")}), std::move(hit)));
    f.body.stmts.push_back(FuncStmt::local("any", num(0)));
    f.body.stmts.push_back(FuncStmt::for_stmt("k", num(0), max_minus(1), std::move(loop)));
    f.body.stmts.push_back(FuncStmt::ret(eq(name("any"), num(0))));
    return f;
}

ExprPtr pending_cond() {
    return band(band(band(lt(name("k"), name("tail")), ne(name("k"), name("run"))),
                     eq(idx("s", name("k")), name("self"))),
                eq(idx("lbl", name("k")), name("l")));
}

FuncDef fn_has_local_pending() {
    FuncDef f;
    f.name = "hasLocalPending";
    f.ret = FuncDef::Ret::Bool;
    f.params = {"l"};
    FuncBody hit;
    hit.stmts.push_back(assign(lv("hp"), num(1)));
    FuncBody loop;
    loop.stmts.push_back(FuncStmt::if_stmt(pending_cond(), std::move(hit)));
    f.body.stmts.push_back(FuncStmt::local("hp", num(0)));
    f.body.stmts.push_back(FuncStmt::for_stmt("k", num(0), max_minus(1), std::move(loop)));
    f.body.stmts.push_back(FuncStmt::ret(eq(name("hp"), num(1))));
    return f;
}

FuncDef fn_first_pending() {
    FuncDef f;
    f.name = "firstPending";
    f.ret = FuncDef::Ret::Int;
    f.params = {"l"};
    FuncBody hit;
    hit.stmts.push_back(assign(lv("fp"), name("k")));
    hit.stmts.push_back(assign(lv("done"), num(1)));
    FuncBody loop;
    loop.stmts.push_back(
        FuncStmt::if_stmt(band(eq(name("done"), num(0)), pending_cond()), std::move(hit)));
    f.body.stmts.push_back(FuncStmt::local("fp", num(0)));
    f.body.stmts.push_back(FuncStmt::local("done", num(0)));
    f.body.stmts.push_back(FuncStmt::for_stmt("k", num(0), max_minus(1), std::move(loop)));
    f.body.stmts.push_back(FuncStmt::ret(name("fp")));
    return f;
}

FuncDef fn_shift() {
    // Removes entry `run`: completion is reported on the invocation label
    // (local labelled senders only), the clock share is released, caller
    // pointers are remapped, the queue compacts left, `complete` resets.
    FuncDef f;
    f.name = "shift";
    f.ret = FuncDef::Ret::Void;
    {
        FuncBody mark;
        mark.stmts.push_back(
            assign(lv("labels", {idx("lbl", name("run")), name("self")}), Expr::bool_lit(true)));
        f.body.stmts.push_back(FuncStmt::if_stmt(
            band(band(idx("complete", name("self")), eq(idx("s", name("run")), name("self"))),
                 gt(idx("lbl", name("run")), num(0))),
            std::move(mark)));
    }
    f.body.stmts.push_back(
        assign(lv("counter", {idx("ca", name("run"))}),
               bin(ta::BinOp::Sub, idx("counter", idx("ca", name("run"))), num(1))));
    {
        FuncBody dec;
        dec.stmts.push_back(assign(lv("caller", {name("i")}),
                                   bin(ta::BinOp::Sub, idx("caller", name("i")), num(1))));
        FuncBody loop;
        loop.stmts.push_back(FuncStmt::if_stmt(
            band(ne(name("i"), name("run")), gt(idx("caller", name("i")), name("run"))),
            std::move(dec)));
        f.body.stmts.push_back(FuncStmt::for_stmt("i", num(0), max_minus(1), std::move(loop)));
    }
    {
        FuncBody move;
        auto next = [&](const char* a) { return idx(a, bin(ta::BinOp::Add, name("j"), num(1))); };
        move.stmts.push_back(assign(lv("q", {name("j")}), next("q")));
        move.stmts.push_back(assign(lv("s", {name("j")}), next("s")));
        move.stmts.push_back(assign(lv("lbl", {name("j")}), next("lbl")));
        move.stmts.push_back(assign(lv("caller", {name("j")}), next("caller")));
        move.stmts.push_back(assign(lv("ca", {name("j")}), next("ca")));
        FuncBody loop;
        loop.stmts.push_back(FuncStmt::if_stmt(ge(name("j"), name("run")), std::move(move)));
        f.body.stmts.push_back(FuncStmt::for_stmt("j", num(0), max_minus(2), std::move(loop)));
    }
    f.body.stmts.push_back(assign(lv("tail"), bin(ta::BinOp::Sub, name("tail"), num(1))));
    f.body.stmts.push_back(assign(lv("q", {name("tail")}), name("EMPTY")));
    f.body.stmts.push_back(assign(lv("caller", {name("tail")}), name("NONE")));
    f.body.stmts.push_back(assign(lv("complete", {name("self")}), Expr::bool_lit(true)));
    return f;
}

FuncDef fn_adjusted_index() {
    FuncDef f;
    f.name = "adjustedIndex";
    f.ret = FuncDef::Ret::Int;
    f.params = {"i"};
    FuncBody dec;
    dec.stmts.push_back(FuncStmt::ret(bin(ta::BinOp::Sub, name("i"), num(1))));
    f.body.stmts.push_back(FuncStmt::if_stmt(gt(name("i"), name("run")), std::move(dec)));
    f.body.stmts.push_back(FuncStmt::ret(name("i")));
    return f;
}

FuncDef fn_shift_select() {
    FuncDef f;
    f.name = "shiftSelect";
    f.ret = FuncDef::Ret::Void;
    f.params = {"i"};
    f.body.stmts.push_back(assign(lv("nextRun"), callE("adjustedIndex", {name("i")})));
    f.body.stmts.push_back(FuncStmt::call_stmt("shift", {}));
    f.body.stmts.push_back(assign(lv("run"), name("nextRun")));
    return f;
}

FuncDef fn_shift_resume() {
    FuncDef f;
    f.name = "shiftResume";
    f.ret = FuncDef::Ret::Void;
    f.body.stmts.push_back(assign(lv("resLbl"), idx("lbl", name("run"))));
    f.body.stmts.push_back(
        assign(lv("nextRun"), callE("adjustedIndex", {idx("caller", name("run"))})));
    f.body.stmts.push_back(FuncStmt::call_stmt("shift", {}));
    f.body.stmts.push_back(assign(lv("run"), name("nextRun")));
    return f;
}

FuncDef fn_shift_idle() {
    FuncDef f;
    f.name = "shiftIdle";
    f.ret = FuncDef::Ret::Void;
    f.body.stmts.push_back(FuncStmt::call_stmt("shift", {}));
    f.body.stmts.push_back(assign(lv("run"), num(0)));
    return f;
}

FuncDef fn_shift_block_all() {
    FuncDef f;
    f.name = "shiftBlockAll";
    f.ret = FuncDef::Ret::Void;
    f.body.stmts.push_back(FuncStmt::call_stmt("shift", {}));
    f.body.stmts.push_back(assign(lv("run"), name("MAX")));
    return f;
}

FuncDef fn_mark_caller() {
    FuncDef f;
    f.name = "markCaller";
    f.ret = FuncDef::Ret::Void;
    f.params = {"l"};
    f.body.stmts.push_back(FuncStmt::local("k", callE("firstPending", {name("l")})));
    f.body.stmts.push_back(assign(lv("caller", {name("k")}), name("run")));
    return f;
}

FuncDef fn_sync_call() {
    FuncDef f;
    f.name = "syncCall";
    f.ret = FuncDef::Ret::Void;
    f.params = {"l"};
    f.body.stmts.push_back(FuncStmt::local("k", callE("firstPending", {name("l")})));
    f.body.stmts.push_back(assign(lv("caller", {name("k")}), name("run")));
    f.body.stmts.push_back(assign(lv("run"), name("k")));
    return f;
}

FuncDef fn_fps_best(int max_queue) {
    // Smaller priority value is served earlier; ties go to the older entry.
    FuncDef f;
    f.name = "fpsBest";
    f.ret = FuncDef::Ret::Bool;
    f.params = {"i"};
    FuncBody demote1;
    demote1.stmts.push_back(assign(lv("ok"), num(0)));
    FuncBody demote2;
    demote2.stmts.push_back(assign(lv("ok"), num(0)));
    FuncBody inner;
    inner.stmts.push_back(FuncStmt::if_stmt(
        lt(idx("prio", idx("q", name("m"))), idx("prio", idx("q", name("i")))),
        std::move(demote1)));
    inner.stmts.push_back(FuncStmt::if_stmt(
        band(eq(idx("prio", idx("q", name("m"))), idx("prio", idx("q", name("i")))),
             lt(name("m"), name("i"))),
        std::move(demote2)));
    FuncBody loop;
    loop.stmts.push_back(FuncStmt::if_stmt(
        band(ne(name("m"), name("i")), callE("canSelect", {name("m")})), std::move(inner)));
    f.body.stmts.push_back(FuncStmt::local("ok", num(1)));
    f.body.stmts.push_back(FuncStmt::for_stmt("m", num(0), num(max_queue - 1), std::move(loop)));
    f.body.stmts.push_back(FuncStmt::ret(eq(name("ok"), num(1))));
    return f;
}

FuncDef fn_fcfs_best(int max_queue) {
    // First-come-first-served: the oldest selectable entry wins.
    FuncDef f;
    f.name = "fcfsBest";
    f.ret = FuncDef::Ret::Bool;
    f.params = {"i"};
    FuncBody demote;
    demote.stmts.push_back(assign(lv("ok"), num(0)));
    FuncBody loop;
    loop.stmts.push_back(FuncStmt::if_stmt(
        band(lt(name("m"), name("i")), callE("canSelect", {name("m")})), std::move(demote)));
    f.body.stmts.push_back(FuncStmt::local("ok", num(1)));
    f.body.stmts.push_back(FuncStmt::for_stmt("m", num(0), num(max_queue - 1), std::move(loop)));
    f.body.stmts.push_back(FuncStmt::ret(eq(name("ok"), num(1))));
    return f;
}

struct SelectionGuard {
    ExprPtr disc;
    std::vector<ClockAtom> atoms;
};

// Guard under which queue index i is the strategy's unique pick among the
// selectable entries.
SelectionGuard selection_guard(int i, Strategy strat, int max_queue) {
    SelectionGuard g;
    g.disc = callE("canSelect", {num(i)});
    switch (strat) {
        case Strategy::Edf:
            // remaining(i) = d[ca[i]] - x[ca[i]]; i wins strictly against
            // older entries and weakly against younger ones, so ties go to
            // the older entry and the pick is unique.
            for (int m = 0; m < max_queue; ++m) {
                if (m == i) continue;
                ClockAtom a;
                a.when = callE("canSelect", {num(m)});
                a.left = ClockRef::elem("x", idx("ca", num(m)));
                a.minus = ClockRef::elem("x", idx("ca", num(i)));
                a.rel = m < i ? Rel::Lt : Rel::Le;
                a.bound = bin(ta::BinOp::Sub, idx("d", idx("ca", num(m))),
                              idx("d", idx("ca", num(i))));
                g.atoms.push_back(std::move(a));
            }
            break;
        case Strategy::Fps:
            g.disc = band(g.disc, callE("fpsBest", {num(i)}));
            break;
        case Strategy::Fcfs:
            g.disc = band(g.disc, callE("fcfsBest", {num(i)}));
            break;
    }
    return g;
}

}  // namespace

void add_scheduler_globals(ta::Declarations& globals, const SchedulerConfig& config) {
    globals.add_constant("MAX", config.max_queue);
    globals.add_constant("EMPTY", -1);
    globals.add_constant("NONE", -1);
}

ta::Template build_scheduler(const xlate::TranslationResult& tr, const SchedulerConfig& config,
                             DiagnosticList& diags) {
    const int MAXQ = config.max_queue;
    const long MSG = *tr.globals.find_constant("MSG");
    const long LBL = *tr.globals.find_constant("LBL");
    const int n_obj = tr.n_obj;

    TemplateBuilder b("Scheduler");
    b.arg("self");
    ta::Declarations& loc = b.tmpl().locals;

    loc.clocks.push_back({"x", MAXQ});
    auto arr = [&](const std::string& n, long lo, long hi, long init_val) {
        ta::VarDecl v;
        v.name = n;
        v.lo = lo;
        v.hi = hi;
        v.dims = {MAXQ};
        if (init_val != 0) v.init.assign(static_cast<std::size_t>(MAXQ), init_val);
        loc.vars.push_back(v);
    };
    arr("q", -1, MSG, -1);
    arr("s", 0, n_obj - 1, 0);
    arr("lbl", 0, LBL, 0);
    arr("caller", -1, MAXQ - 1, -1);
    arr("ca", 0, MAXQ - 1, 0);
    arr("d", 0, tr.deadlines.max, 0);
    arr("counter", 0, MAXQ, 0);
    auto scalar = [&](const std::string& n, long lo, long hi) {
        ta::VarDecl v;
        v.name = n;
        v.lo = lo;
        v.hi = hi;
        loc.vars.push_back(v);
    };
    scalar("run", 0, MAXQ);
    scalar("tail", 0, MAXQ);
    scalar("blockLbl", 0, LBL);
    scalar("resLbl", 0, LBL);
    scalar("nextRun", 0, MAXQ);

    if (config.strategy == Strategy::Fps) {
        ta::VarDecl prio;
        prio.name = "prio";
        prio.lo = 0;
        prio.hi = 1 << 20;
        prio.dims = {static_cast<int>(MSG) + 1};
        prio.is_const = true;
        prio.init.assign(static_cast<std::size_t>(MSG) + 1, 1);
        for (const auto& t : tr.table.tasks) {
            auto it = config.priorities.find(t.name);
            if (it == config.priorities.end()) it = config.priorities.find(t.method);
            if (it == config.priorities.end()) {
                diags.error({}, "fixed-priority strategy: no priority for task '" + t.name + "'");
                continue;
            }
            prio.init[static_cast<std::size_t>(t.id)] = it->second;
        }
        loc.vars.push_back(prio);
    }

    loc.functions.push_back(fn_find_free_clock());
    loc.functions.push_back(fn_insert_invoke());
    loc.functions.push_back(fn_insert_delegate());
    loc.functions.push_back(fn_is_blocked());
    loc.functions.push_back(fn_can_select());
    loc.functions.push_back(fn_none_selectable());
    loc.functions.push_back(fn_has_local_pending());
    loc.functions.push_back(fn_first_pending());
    loc.functions.push_back(fn_shift());
    loc.functions.push_back(fn_adjusted_index());
    loc.functions.push_back(fn_shift_select());
    loc.functions.push_back(fn_shift_resume());
    loc.functions.push_back(fn_shift_idle());
    loc.functions.push_back(fn_shift_block_all());
    loc.functions.push_back(fn_mark_caller());
    loc.functions.push_back(fn_sync_call());
    if (config.strategy == Strategy::Fps) loc.functions.push_back(fn_fps_best(MAXQ));
    if (config.strategy == Strategy::Fcfs) loc.functions.push_back(fn_fcfs_best(MAXQ));

    // ---- locations ----
    int boot = b.add_location("Boot", Urgency::Committed);
    b.set_initial(boot);
    int busy = b.add_location("Busy", Urgency::Normal);
    int blocked = b.add_location("Blocked", Urgency::Normal);
    int dispatch = b.add_location("Dispatch", Urgency::Committed);
    int dispatch_r = b.add_location("DispatchR", Urgency::Committed);
    int reselect = b.add_location("Reselect", Urgency::Committed);
    int error = b.add_location("Error", Urgency::Normal);

    ExprPtr self = name("self");

    // ---- bootstrap (t7 enqueue init/run, t8 start init) ----
    std::vector<std::string> boot_tasks;
    for (const char* n : {"init", "run"})
        if (tr.table.find(n) && tr.table.find(n)->is_method) boot_tasks.push_back(n);
    if (static_cast<int>(boot_tasks.size()) > MAXQ) {
        Edge& e = b.add_edge(boot, error);
        e.note = "t10: bootstrap overflows the queue";
    } else if (boot_tasks.empty()) {
        Edge& e = b.add_edge(boot, busy);
        e.note = "t7: nothing to bootstrap, idle";
    } else {
        Edge& e = b.add_edge(boot, dispatch);
        for (const auto& t : boot_tasks) {
            e.updates.push_back(UpdateItem::call(
                "insertInvoke", {name(TaskTable::task_const(t)), self, num(0)}));
            e.updates.push_back(UpdateItem::reset(
                ClockRef::elem("x", idx("ca", bin(ta::BinOp::Sub, name("tail"), num(1))))));
        }
        e.updates.push_back(UpdateItem::assign(lv("run"), num(0)));
        e.note = "t7: enqueue " + boot_tasks[0] +
                 (boot_tasks.size() > 1 ? "/" + boot_tasks[1] : "") + ", then t8 starts q[0]";
    }

    // ---- dispatch (t3/t8 start, t1 resume); committed so no time passes ----
    {
        Edge& e = b.add_edge(dispatch, busy);
        e.sync = Sync{"start", {idx("q", name("run")), self}, true};
        e.note = "t3/t8: start the selected task";
    }
    {
        Edge& e = b.add_edge(dispatch_r, busy);
        e.sync = Sync{"resume", {name("resLbl"), self}, true};
        e.note = "t1: resume the blocked caller";
    }

    // ---- reselect after a wake-up event while no task was running ----
    for (int i = 0; i < MAXQ; ++i) {
        SelectionGuard sg = selection_guard(i, config.strategy, MAXQ);
        Edge& e = b.add_edge(reselect, dispatch);
        e.guard.discrete = sg.disc;
        e.guard.atoms = sg.atoms;
        e.updates.push_back(UpdateItem::assign(lv("run"), num(i)));
        e.note = "t3: wake-up selects q[" + std::to_string(i) + "]";
    }
    {
        Edge& e = b.add_edge(reselect, busy);
        e.guard.discrete = callE("noneSelectable", {});
        e.note = "wake-up found nothing startable";
    }

    // ---- invoke receives (t5) and overflow (t10) ----
    struct InvokeTarget {
        long label;
        std::string method_const;
        int sender;
    };
    std::vector<InvokeTarget> invokes;
    for (long l = 0; l <= LBL; ++l)
        for (const auto& t : tr.table.tasks)
            if (t.is_method)
                for (int snd = 0; snd < n_obj; ++snd)
                    invokes.push_back({l, TaskTable::task_const(t.name), snd});

    for (const auto& iv : invokes) {
        Sync sync{"invoke", {num(iv.label), name(iv.method_const), self, num(iv.sender)}, false};
        auto insert_items = [&](Edge& e) {
            e.updates.push_back(UpdateItem::call(
                "insertInvoke", {name(iv.method_const), num(iv.sender), num(iv.label)}));
            e.updates.push_back(UpdateItem::reset(
                ClockRef::elem("x", idx("ca", bin(ta::BinOp::Sub, name("tail"), num(1))))));
        };
        {
            Edge& e = b.add_edge(busy, busy);
            e.sync = sync;
            e.guard.discrete = band(band(gt(name("tail"), num(0)), lt(name("tail"), name("MAX"))),
                                    ne(name("run"), name("MAX")));
            insert_items(e);
            e.note = "t5: insert " + iv.method_const;
        }
        {
            Edge& e = b.add_edge(busy, reselect);
            e.sync = sync;
            e.guard.discrete = band(lt(name("tail"), name("MAX")),
                                    bor(eq(name("tail"), num(0)), eq(name("run"), name("MAX"))));
            insert_items(e);
            e.updates.push_back(UpdateItem::assign(lv("run"), name("MAX")));
            e.note = "t5: insert " + iv.method_const + " and wake the processor";
        }
        {
            Edge& e = b.add_edge(busy, error);
            e.sync = sync;
            e.guard.discrete = eq(name("tail"), name("MAX"));
            e.note = "t10: queue overflow";
        }
        {
            Edge& e = b.add_edge(blocked, blocked);
            e.sync = sync;
            e.guard.discrete = lt(name("tail"), name("MAX"));
            insert_items(e);
            e.note = "t5: insert " + iv.method_const + " while blocked";
        }
        {
            Edge& e = b.add_edge(blocked, error);
            e.sync = sync;
            e.guard.discrete = eq(name("tail"), name("MAX"));
            e.note = "t10: queue overflow while blocked";
        }
    }

    // ---- delegate receives (t4) ----
    for (const auto& t : tr.table.tasks) {
        if (t.is_method) continue;
        Sync sync{"delegate", {name(TaskTable::task_const(t.name)), self}, false};
        {
            Edge& e = b.add_edge(busy, busy);
            e.sync = sync;
            e.guard.discrete = lt(name("tail"), name("MAX"));
            e.updates.push_back(
                UpdateItem::call("insertDelegate", {name(TaskTable::task_const(t.name))}));
            e.note = "t4: subtask " + t.name + " inherits the parent deadline";
        }
        {
            Edge& e = b.add_edge(busy, error);
            e.sync = sync;
            e.guard.discrete = eq(name("tail"), name("MAX"));
            e.note = "t10: queue overflow on delegate";
        }
    }

    // ---- reply receives (t6) ----
    for (long l = 1; l <= LBL; ++l) {
        Sync sync{"reply", {num(l), self}, false};
        auto mark = [&](Edge& e) {
            e.updates.push_back(
                UpdateItem::assign(lv("labels", {num(l), self}), Expr::bool_lit(true)));
        };
        {
            Edge& e = b.add_edge(busy, busy);
            e.sync = sync;
            e.guard.discrete = ne(name("run"), name("MAX"));
            mark(e);
            e.note = "t6: reply available";
        }
        {
            Edge& e = b.add_edge(busy, reselect);
            e.sync = sync;
            e.guard.discrete = eq(name("run"), name("MAX"));
            mark(e);
            e.note = "t6: reply may enable a waiting subtask";
        }
        {
            Edge& e = b.add_edge(blocked, dispatch_r);
            e.sync = sync;
            e.guard.discrete = eq(num(l), name("blockLbl"));
            mark(e);
            e.updates.push_back(UpdateItem::assign(lv("resLbl"), name("blockLbl")));
            e.note = "t6+t1: awaited reply unblocks the object";
        }
        {
            Edge& e = b.add_edge(blocked, blocked);
            e.sync = sync;
            e.guard.discrete = ne(num(l), name("blockLbl"));
            mark(e);
            e.note = "t6: unrelated reply while blocked";
        }
    }

    // ---- wait receives (t2): blocking replies ----
    for (long l = 1; l <= LBL; ++l) {
        Sync sync{"wait", {num(l), self}, false};
        ExprPtr have_label = idx2("labels", num(l), self);
        ExprPtr pending = callE("hasLocalPending", {num(l)});
        ExprPtr callee_enabled =
            callE("isEnabled", {idx("q", callE("firstPending", {num(l)})), self});
        {
            Edge& e = b.add_edge(busy, dispatch_r);
            e.sync = sync;
            e.guard.discrete = have_label;
            e.updates.push_back(UpdateItem::assign(lv("resLbl"), num(l)));
            e.note = "t2: reply already there, resume at once";
        }
        {
            Edge& e = b.add_edge(busy, dispatch);
            e.sync = sync;
            e.guard.discrete = band(band(notE(have_label), pending), callee_enabled);
            e.updates.push_back(UpdateItem::call("syncCall", {num(l)}));
            e.note = "t2: local pending call, run it synchronously";
        }
        ExprPtr parked = band(band(notE(have_label), pending), notE(callee_enabled));
        for (int i = 0; i < MAXQ; ++i) {
            SelectionGuard sg = selection_guard(i, config.strategy, MAXQ);
            Edge& e = b.add_edge(busy, dispatch);
            e.sync = sync;
            e.guard.discrete = band(parked, sg.disc);
            e.guard.atoms = sg.atoms;
            e.updates.push_back(UpdateItem::call("markCaller", {num(l)}));
            e.updates.push_back(UpdateItem::assign(lv("run"), num(i)));
            e.note = "t2: callee parked and disabled, select q[" + std::to_string(i) + "]";
        }
        {
            Edge& e = b.add_edge(busy, busy);
            e.sync = sync;
            e.guard.discrete = band(parked, callE("noneSelectable", {}));
            e.updates.push_back(UpdateItem::call("markCaller", {num(l)}));
            e.updates.push_back(UpdateItem::assign(lv("run"), name("MAX")));
            e.note = "t2: callee parked, nothing else startable";
        }
        {
            Edge& e = b.add_edge(busy, blocked);
            e.sync = sync;
            e.guard.discrete = band(notE(have_label), notE(pending));
            e.updates.push_back(UpdateItem::assign(lv("blockLbl"), num(l)));
            e.note = "t2: remote reply outstanding, block the object";
        }
    }

    // ---- finish receives (t11/t12/t13 and the resume variant) ----
    {
        Sync sync{"finish", {self}, false};
        ExprPtr resume_case =
            band(ne(idx("caller", name("run")), name("NONE")), idx("complete", self));
        ExprPtr no_resume =
            bor(eq(idx("caller", name("run")), name("NONE")), notE(idx("complete", self)));
        {
            Edge& e = b.add_edge(busy, dispatch_r);
            e.sync = sync;
            e.guard.discrete = resume_case;
            e.updates.push_back(UpdateItem::call("shiftResume", {}));
            e.note = "synchronous callee finished, resume its caller (t1)";
        }
        {
            Edge& e = b.add_edge(busy, busy);
            e.sync = sync;
            e.guard.discrete = band(no_resume, eq(name("tail"), num(1)));
            e.updates.push_back(UpdateItem::call("shiftIdle", {}));
            e.note = "t13: last task done, processor idles";
        }
        for (int i = 0; i < MAXQ; ++i) {
            SelectionGuard sg = selection_guard(i, config.strategy, MAXQ);
            Edge& e = b.add_edge(busy, dispatch);
            e.sync = sync;
            e.guard.discrete = band(band(no_resume, gt(name("tail"), num(1))), sg.disc);
            e.guard.atoms = sg.atoms;
            e.updates.push_back(UpdateItem::call("shiftSelect", {num(i)}));
            e.note = "t12: context switch to q[" + std::to_string(i) + "]";
        }
        {
            Edge& e = b.add_edge(busy, busy);
            e.sync = sync;
            e.guard.discrete =
                band(band(no_resume, gt(name("tail"), num(1))), callE("noneSelectable", {}));
            e.updates.push_back(UpdateItem::call("shiftBlockAll", {}));
            e.note = "t11: all remaining tasks disabled";
        }
    }

    // ---- deadline misses (t9) ----
    for (int src : {busy, blocked}) {
        for (int i = 0; i < MAXQ; ++i) {
            Edge& e = b.add_edge(src, error);
            e.guard.discrete = lt(num(i), name("tail"));
            ClockAtom a;
            a.left = ClockRef::elem("x", idx("ca", num(i)));
            a.rel = config.miss_strict ? Rel::Gt : Rel::Ge;
            a.bound = idx("d", idx("ca", num(i)));
            e.guard.atoms.push_back(std::move(a));
            e.note = "t9: q[" + std::to_string(i) + "] missed its deadline";
        }
    }

    return b.finalize();
}

}  // namespace creol2ta::sched
