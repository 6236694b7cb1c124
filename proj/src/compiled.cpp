#include "creol2ta/analysis/compiled.hpp"

#include <algorithm>
#include <map>

namespace creol2ta::analysis {

namespace {

struct SlotInfo {
    int base;
    std::vector<int> dims;
};

// Name resolution scope for one compilation unit (global declarations or one
// instance). Function frames layer on top during function compilation.
struct Scope {
    const CompiledSystem* sys;
    std::map<std::string, long> consts;           // constants + folded args
    std::map<std::string, SlotInfo> slots;        // variables
    std::map<std::string, std::pair<int, int>> clocks;  // name -> (base, size)
    std::map<std::string, int> funcs;             // name -> func id
    // function compilation state
    std::map<std::string, int>* frame = nullptr;  // name -> frame offset
};

class Compiler {
public:
    explicit Compiler(const ta::SystemModel& sys) : model_(sys) {}

    CompiledSystem run() {
        out_.model = &model_;
        out_.clock_names.push_back("t0");

        // global channels
        for (const auto& c : model_.globals.channels)
            out_.channels.push_back({c.name, c.dims, c.urgent});

        global_.sys = &out_;
        declare(model_.globals, global_, "");

        // global functions compiled in global scope
        for (const auto& f : model_.globals.functions) compile_function(f, global_);

        for (const auto& inst : model_.instances) compile_instance(inst);

        out_.n_clocks = static_cast<int>(out_.clock_names.size()) - 1;
        out_.max_const.assign(static_cast<std::size_t>(out_.n_clocks) + 1, 0);
        gather_max_constants();
        build_channel_index();
        return out_;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw CompileError(msg); }

    void declare(const ta::Declarations& d, Scope& sc, const std::string& prefix) {
        for (const auto& [n, v] : d.constants) sc.consts[n] = v;
        for (const auto& c : d.clocks) {
            int base = static_cast<int>(out_.clock_names.size());
            int n = c.size == 0 ? 1 : c.size;
            for (int i = 0; i < n; ++i)
                out_.clock_names.push_back(prefix + c.name +
                                           (c.size ? "[" + std::to_string(i) + "]" : ""));
            sc.clocks[c.name] = {base, c.size};
        }
        for (const auto& v : d.vars) {
            SlotInfo si;
            si.base = static_cast<int>(out_.init_disc.size());
            si.dims = v.dims;
            long n = v.flat_size();
            for (long i = 0; i < n; ++i) {
                long init = v.init.empty() ? 0 : v.init[static_cast<std::size_t>(i)];
                out_.init_disc.push_back(static_cast<std::int32_t>(init));
                out_.slot_range.emplace_back(static_cast<std::int32_t>(v.lo),
                                             static_cast<std::int32_t>(v.hi));
                out_.slot_meta.push_back(v.meta);
                std::string nm = prefix + v.name;
                if (!v.dims.empty()) {
                    long rem = i;
                    std::vector<long> idx(v.dims.size());
                    for (int k = static_cast<int>(v.dims.size()) - 1; k >= 0; --k) {
                        idx[static_cast<std::size_t>(k)] = rem % v.dims[static_cast<std::size_t>(k)];
                        rem /= v.dims[static_cast<std::size_t>(k)];
                    }
                    for (long x : idx) nm += "[" + std::to_string(x) + "]";
                }
                out_.slot_names.push_back(nm);
            }
            sc.slots[v.name] = si;
        }
    }

    // ---- expressions ----

    CompiledExpr compile_expr(const ta::ExprPtr& e, Scope& sc) {
        if (!e) {
            CompiledExpr c;
            c.kind = CompiledExpr::Kind::Const;
            c.value = 1;
            return c;
        }
        return compile_expr(*e, sc);
    }

    CompiledExpr compile_expr(const ta::Expr& e, Scope& sc) {
        CompiledExpr c;
        switch (e.kind) {
            case ta::Expr::Kind::IntLit:
            case ta::Expr::Kind::BoolLit:
                c.kind = CompiledExpr::Kind::Const;
                c.value = e.value;
                return c;
            case ta::Expr::Kind::Name: {
                if (sc.frame) {
                    auto it = sc.frame->find(e.name);
                    if (it != sc.frame->end()) {
                        c.kind = CompiledExpr::Kind::Slot;
                        c.frame_off = it->second;
                        return c;
                    }
                }
                auto ct = sc.consts.find(e.name);
                if (ct != sc.consts.end()) {
                    c.kind = CompiledExpr::Kind::Const;
                    c.value = ct->second;
                    return c;
                }
                auto st = sc.slots.find(e.name);
                if (st != sc.slots.end()) {
                    if (!st->second.dims.empty())
                        fail("array '" + e.name + "' used without index");
                    c.kind = CompiledExpr::Kind::Slot;
                    c.slot_base = st->second.base;
                    return c;
                }
                auto gt = global_.slots.find(e.name);
                if (gt != global_.slots.end()) {
                    if (!gt->second.dims.empty())
                        fail("array '" + e.name + "' used without index");
                    c.kind = CompiledExpr::Kind::Slot;
                    c.slot_base = gt->second.base;
                    return c;
                }
                auto gc = global_.consts.find(e.name);
                if (gc != global_.consts.end()) {
                    c.kind = CompiledExpr::Kind::Const;
                    c.value = gc->second;
                    return c;
                }
                fail("unresolved name '" + e.name + "'");
            }
            case ta::Expr::Kind::Index: {
                const SlotInfo* si = nullptr;
                auto st = sc.slots.find(e.name);
                if (st != sc.slots.end()) si = &st->second;
                if (!si) {
                    auto gt = global_.slots.find(e.name);
                    if (gt != global_.slots.end()) si = &gt->second;
                }
                if (!si) fail("unresolved array '" + e.name + "'");
                if (si->dims.size() != e.args.size())
                    fail("array '" + e.name + "' index count mismatch");
                c.kind = CompiledExpr::Kind::Slot;
                c.slot_base = si->base;
                c.dims = si->dims;
                for (const auto& a : e.args) c.kids.push_back(compile_expr(*a, sc));
                return c;
            }
            case ta::Expr::Kind::Unary:
                c.kind = CompiledExpr::Kind::Un;
                c.un = e.un;
                c.kids.push_back(compile_expr(*e.args[0], sc));
                return c;
            case ta::Expr::Kind::Binary:
                c.kind = CompiledExpr::Kind::Bin;
                c.bin = e.bin;
                c.kids.push_back(compile_expr(*e.args[0], sc));
                c.kids.push_back(compile_expr(*e.args[1], sc));
                return c;
            case ta::Expr::Kind::Call: {
                auto ft = sc.funcs.find(e.name);
                if (ft == sc.funcs.end()) {
                    ft = global_.funcs.find(e.name);
                    if (ft == global_.funcs.end()) fail("unresolved function '" + e.name + "'");
                }
                c.kind = CompiledExpr::Kind::Call;
                c.fn = ft->second;
                for (const auto& a : e.args) c.kids.push_back(compile_expr(*a, sc));
                return c;
            }
        }
        fail("unreachable expression kind");
    }

    CLValue compile_lvalue(const ta::LValue& lv, Scope& sc) {
        CLValue out;
        if (sc.frame) {
            auto it = sc.frame->find(lv.name);
            if (it != sc.frame->end()) {
                if (!lv.indices.empty()) fail("frame variable '" + lv.name + "' is scalar");
                out.frame = true;
                out.frame_off = it->second;
                return out;
            }
        }
        const SlotInfo* si = nullptr;
        auto st = sc.slots.find(lv.name);
        if (st != sc.slots.end()) si = &st->second;
        if (!si) {
            auto gt = global_.slots.find(lv.name);
            if (gt != global_.slots.end()) si = &gt->second;
        }
        if (!si) fail("assignment to unresolved '" + lv.name + "'");
        if (si->dims.size() != lv.indices.size())
            fail("assignment to '" + lv.name + "': index count mismatch");
        out.slot_base = si->base;
        out.dims = si->dims;
        for (const auto& i : lv.indices) out.indices.push_back(compile_expr(*i, sc));
        return out;
    }

    CClockRef compile_clock(const ta::ClockRef& c, Scope& sc) {
        CClockRef out;
        auto it = sc.clocks.find(c.clock);
        if (it == sc.clocks.end()) {
            it = global_.clocks.find(c.clock);
            if (it == global_.clocks.end()) fail("unresolved clock '" + c.clock + "'");
        }
        out.base = it->second.first;
        out.size = it->second.second;
        if (c.index) {
            out.has_index = true;
            out.index = compile_expr(*c.index, sc);
        }
        return out;
    }

    CAtom compile_atom(const ta::ClockAtom& a, Scope& sc) {
        CAtom out;
        if (a.when) {
            out.has_when = true;
            out.when = compile_expr(*a.when, sc);
        }
        out.left = compile_clock(a.left, sc);
        if (a.minus) {
            out.has_minus = true;
            out.minus = compile_clock(*a.minus, sc);
        }
        out.rel = a.rel;
        out.bound = compile_expr(a.bound, sc);
        return out;
    }

    // ---- functions ----

    int compile_function(const ta::FuncDef& f, Scope& sc) {
        CFunc cf;
        cf.name = f.name;
        cf.n_params = static_cast<int>(f.params.size());
        std::map<std::string, int> frame;
        int next = 0;
        for (const auto& p : f.params) frame[p] = next++;
        Scope inner = sc;
        inner.frame = &frame;

        std::function<std::vector<CStmt>(const ta::FuncBody&)> walk =
            [&](const ta::FuncBody& body) {
                std::vector<CStmt> out;
                for (const auto& s : body.stmts) {
                    CStmt cs;
                    switch (s.kind) {
                        case ta::FuncStmt::Kind::Assign:
                            cs.kind = CStmt::Kind::Assign;
                            cs.lhs = compile_lvalue(s.lhs, inner);
                            cs.rhs = compile_expr(s.rhs, inner);
                            break;
                        case ta::FuncStmt::Kind::If:
                            cs.kind = CStmt::Kind::If;
                            cs.cond = compile_expr(s.cond, inner);
                            cs.then_body = walk(s.then_body);
                            cs.else_body = walk(s.else_body);
                            break;
                        case ta::FuncStmt::Kind::For: {
                            cs.kind = CStmt::Kind::For;
                            if (frame.count(s.var)) fail("loop variable '" + s.var + "' reused");
                            cs.frame_off = next;
                            frame[s.var] = next++;
                            cs.lo = compile_expr(s.lo, inner);
                            cs.hi = compile_expr(s.hi, inner);
                            cs.then_body = walk(s.then_body);
                            break;
                        }
                        case ta::FuncStmt::Kind::Return:
                            cs.kind = CStmt::Kind::Return;
                            if (s.cond) {
                                cs.has_ret_value = true;
                                cs.cond = compile_expr(s.cond, inner);
                            }
                            break;
                        case ta::FuncStmt::Kind::Local:
                            cs.kind = CStmt::Kind::Local;
                            if (frame.count(s.var)) fail("local '" + s.var + "' reused");
                            cs.frame_off = next;
                            frame[s.var] = next++;
                            if (s.init) {
                                cs.has_init = true;
                                cs.init = compile_expr(s.init, inner);
                            }
                            break;
                        case ta::FuncStmt::Kind::CallStmt:
                            cs.kind = CStmt::Kind::Call;
                            cs.rhs = compile_expr(s.rhs, inner);
                            break;
                    }
                    out.push_back(std::move(cs));
                }
                return out;
            };
        cf.body = walk(f.body);
        cf.frame_size = next;
        int id = static_cast<int>(out_.funcs.size());
        out_.funcs.push_back(std::move(cf));
        sc.funcs[f.name] = id;
        return id;
    }

    // ---- instances ----

    void compile_instance(const ta::Instance& inst) {
        const ta::Template* t = model_.find_template(inst.template_name);
        if (!t) fail("instance '" + inst.name + "': unknown template");
        if (inst.args.size() != t->args.size())
            fail("instance '" + inst.name + "': argument count mismatch");

        Scope sc;
        sc.sys = &out_;
        sc.consts = global_.consts;
        sc.funcs = global_.funcs;
        for (std::size_t k = 0; k < t->args.size(); ++k) sc.consts[t->args[k]] = inst.args[k];
        declare(t->locals, sc, inst.name + ".");
        for (const auto& f : t->locals.functions) compile_function(f, sc);

        CInstance ci;
        ci.name = inst.name;
        ci.template_name = t->name;
        std::map<int, int> loc_remap;
        for (const auto& l : t->locations) {
            loc_remap[l.id] = static_cast<int>(ci.locs.size());
            CLoc cl;
            cl.name = l.name;
            cl.urgency = l.urgency;
            cl.tmpl_loc_id = l.id;
            for (const auto& a : l.invariant) cl.invariant.push_back(compile_atom(a, sc));
            ci.locs.push_back(std::move(cl));
        }
        ci.initial = loc_remap.at(t->initial);

        for (std::size_t ei = 0; ei < t->edges.size(); ++ei) {
            const ta::Edge& e = t->edges[ei];
            CEdge ce;
            ce.src = loc_remap.at(e.src);
            ce.dst = loc_remap.at(e.dst);
            ce.tmpl_edge = static_cast<int>(ei);
            if (e.guard.discrete) {
                ce.has_guard = true;
                ce.guard = compile_expr(*e.guard.discrete, sc);
            }
            for (const auto& a : e.guard.atoms) ce.atoms.push_back(compile_atom(a, sc));
            if (e.sync) {
                int chan = -1;
                for (std::size_t k = 0; k < out_.channels.size(); ++k)
                    if (out_.channels[k].name == e.sync->channel) chan = static_cast<int>(k);
                if (chan < 0) fail("unresolved channel '" + e.sync->channel + "'");
                ce.chan = chan;
                ce.send = e.sync->send;
                for (const auto& i : e.sync->indices) ce.chan_idx.push_back(compile_expr(*i, sc));
            }
            for (const auto& u : e.updates) {
                CUpdate cu;
                switch (u.kind) {
                    case ta::UpdateItem::Kind::Assign:
                        cu.kind = CUpdate::Kind::Assign;
                        cu.lhs = compile_lvalue(u.lhs, sc);
                        cu.rhs = compile_expr(u.rhs, sc);
                        break;
                    case ta::UpdateItem::Kind::Call: {
                        cu.kind = CUpdate::Kind::Call;
                        auto ft = sc.funcs.find(u.fn);
                        if (ft == sc.funcs.end()) fail("unresolved function '" + u.fn + "'");
                        cu.fn = ft->second;
                        for (const auto& a : u.args) cu.args.push_back(compile_expr(*a, sc));
                        break;
                    }
                    case ta::UpdateItem::Kind::ResetClock:
                        cu.kind = CUpdate::Kind::ResetClock;
                        cu.clock = compile_clock(u.clock, sc);
                        break;
                }
                ce.updates.push_back(std::move(cu));
            }
            if (ce.chan < 0) ci.internal_edges.push_back(static_cast<int>(ci.edges.size()));
            ci.edges.push_back(std::move(ce));
        }
        out_.instances.push_back(std::move(ci));
    }

    // ---- post-processing ----

    // Upper estimate of an expression's absolute value, used for per-clock
    // extrapolation ceilings when bounds are state-dependent.
    long bound_magnitude(const CompiledExpr& e) const {
        switch (e.kind) {
            case CompiledExpr::Kind::Const:
                return std::labs(e.value);
            case CompiledExpr::Kind::Slot: {
                if (e.frame_off >= 0) return 1 << 20;
                if (e.dims.empty()) {
                    auto [lo, hi] = out_.slot_range[static_cast<std::size_t>(e.slot_base)];
                    return std::max(std::labs(static_cast<long>(lo)),
                                    std::labs(static_cast<long>(hi)));
                }
                long m = 0;
                long n = 1;
                for (int d : e.dims) n *= d;
                for (long i = 0; i < n; ++i) {
                    auto [lo, hi] = out_.slot_range[static_cast<std::size_t>(e.slot_base + i)];
                    m = std::max({m, std::labs(static_cast<long>(lo)),
                                  std::labs(static_cast<long>(hi))});
                }
                return m;
            }
            case CompiledExpr::Kind::Un:
                return bound_magnitude(e.kids[0]);
            case CompiledExpr::Kind::Bin:
                if (e.bin == ta::BinOp::Add || e.bin == ta::BinOp::Sub)
                    return bound_magnitude(e.kids[0]) + bound_magnitude(e.kids[1]);
                return 1;
            case CompiledExpr::Kind::Call:
                return 1 << 20;
        }
        return 1 << 20;
    }

    void apply_max(const CClockRef& c, long m) {
        if (!c.has_index) {
            out_.max_const[static_cast<std::size_t>(c.base)] = std::max(
                out_.max_const[static_cast<std::size_t>(c.base)], static_cast<std::int32_t>(m));
            return;
        }
        // index depends on state: cover the whole array
        int n = c.size == 0 ? 1 : c.size;
        if (c.index.kind == CompiledExpr::Kind::Const) {
            int i = static_cast<int>(c.index.value);
            out_.max_const[static_cast<std::size_t>(c.base + i)] =
                std::max(out_.max_const[static_cast<std::size_t>(c.base + i)],
                         static_cast<std::int32_t>(m));
            return;
        }
        for (int i = 0; i < n; ++i)
            out_.max_const[static_cast<std::size_t>(c.base + i)] =
                std::max(out_.max_const[static_cast<std::size_t>(c.base + i)],
                         static_cast<std::int32_t>(m));
    }

    void gather_max_constants() {
        auto scan_atom = [&](const CAtom& a) {
            long m = bound_magnitude(a.bound);
            apply_max(a.left, m);
            if (a.has_minus) apply_max(a.minus, m);
        };
        for (const auto& inst : out_.instances) {
            for (const auto& l : inst.locs)
                for (const auto& a : l.invariant) scan_atom(a);
            for (const auto& e : inst.edges)
                for (const auto& a : e.atoms) scan_atom(a);
        }
    }

    void build_channel_index() {
        out_.senders.assign(out_.channels.size(), {});
        out_.receivers.assign(out_.channels.size(), {});
        for (std::size_t i = 0; i < out_.instances.size(); ++i) {
            const CInstance& inst = out_.instances[i];
            for (std::size_t e = 0; e < inst.edges.size(); ++e) {
                const CEdge& ce = inst.edges[e];
                if (ce.chan < 0) continue;
                auto& lst = ce.send ? out_.senders[static_cast<std::size_t>(ce.chan)]
                                    : out_.receivers[static_cast<std::size_t>(ce.chan)];
                lst.emplace_back(static_cast<int>(i), static_cast<int>(e));
            }
        }
    }

    const ta::SystemModel& model_;
    CompiledSystem out_;
    Scope global_;
};

}  // namespace

CompiledSystem compile_system(const ta::SystemModel& sys) {
    return Compiler(sys).run();
}

std::optional<int> CompiledSystem::find_instance(const std::string& name) const {
    for (std::size_t i = 0; i < instances.size(); ++i)
        if (instances[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<int> CompiledSystem::find_location(int instance, const std::string& loc_name) const {
    const CInstance& inst = instances[static_cast<std::size_t>(instance)];
    for (std::size_t l = 0; l < inst.locs.size(); ++l)
        if (inst.locs[l].name == loc_name) return static_cast<int>(l);
    return std::nullopt;
}

std::optional<int> CompiledSystem::find_slot(int instance, const std::string& var,
                                             const std::vector<int>& indices) const {
    std::string full = var;
    for (int i : indices) full += "[" + std::to_string(i) + "]";
    std::string prefixed =
        instance >= 0 ? instances[static_cast<std::size_t>(instance)].name + "." + full : full;
    for (std::size_t s = 0; s < slot_names.size(); ++s)
        if (slot_names[s] == prefixed || slot_names[s] == full) return static_cast<int>(s);
    return std::nullopt;
}

// -- evaluator -------------------------------------------------------------

long Evaluator::eval(const CompiledExpr& e) {
    switch (e.kind) {
        case CompiledExpr::Kind::Const:
            return e.value;
        case CompiledExpr::Kind::Slot: {
            if (e.frame_off >= 0) {
                return (*cur_frame_)[static_cast<std::size_t>(e.frame_off)];
            }
            long off = 0;
            for (std::size_t k = 0; k < e.dims.size(); ++k) {
                long i = eval(e.kids[k]);
                if (i < 0 || i >= e.dims[k])
                    throw ModelingViolation{"array index " + std::to_string(i) +
                                            " out of bounds [0," + std::to_string(e.dims[k]) +
                                            ")"};
                off = off * e.dims[k] + i;
            }
            return disc_[static_cast<std::size_t>(e.slot_base + off)];
        }
        case CompiledExpr::Kind::Un: {
            long v = eval(e.kids[0]);
            return e.un == ta::UnOp::Not ? (v ? 0 : 1) : -v;
        }
        case CompiledExpr::Kind::Bin: {
            if (e.bin == ta::BinOp::And) {
                if (!eval(e.kids[0])) return 0;
                return eval(e.kids[1]) ? 1 : 0;
            }
            if (e.bin == ta::BinOp::Or) {
                if (eval(e.kids[0])) return 1;
                return eval(e.kids[1]) ? 1 : 0;
            }
            long l = eval(e.kids[0]);
            long r = eval(e.kids[1]);
            switch (e.bin) {
                case ta::BinOp::Add: return l + r;
                case ta::BinOp::Sub: return l - r;
                case ta::BinOp::Lt: return l < r;
                case ta::BinOp::Le: return l <= r;
                case ta::BinOp::Gt: return l > r;
                case ta::BinOp::Ge: return l >= r;
                case ta::BinOp::Eq: return l == r;
                case ta::BinOp::Ne: return l != r;
                default: return 0;
            }
        }
        case CompiledExpr::Kind::Call: {
            std::vector<long> args;
            args.reserve(e.kids.size());
            for (const auto& a : e.kids) args.push_back(eval(a));
            return call(e.fn, args);
        }
    }
    return 0;
}

long Evaluator::call(int fn, const std::vector<long>& args) {
    const CFunc& f = sys_.funcs[static_cast<std::size_t>(fn)];
    std::vector<long> frame(static_cast<std::size_t>(f.frame_size), 0);
    for (std::size_t i = 0; i < args.size() && i < static_cast<std::size_t>(f.n_params); ++i)
        frame[i] = args[i];
    std::vector<long>* saved = cur_frame_;
    cur_frame_ = &frame;
    std::optional<long> ret;
    exec_body(f.body, frame, ret);
    cur_frame_ = saved;
    return ret.value_or(0);
}

void Evaluator::exec_body(const std::vector<CStmt>& body, std::vector<long>& frame,
                          std::optional<long>& ret) {
    for (const auto& s : body) {
        if (ret) return;
        exec(s, frame, ret);
    }
}

void Evaluator::store(const CLValue& lv, long v, std::vector<long>* frame) {
    if (lv.frame) {
        (*frame)[static_cast<std::size_t>(lv.frame_off)] = v;
        return;
    }
    long off = 0;
    for (std::size_t k = 0; k < lv.dims.size(); ++k) {
        long i = eval(lv.indices[k]);
        if (i < 0 || i >= lv.dims[k])
            throw ModelingViolation{"array index " + std::to_string(i) + " out of bounds"};
        off = off * lv.dims[k] + i;
    }
    std::size_t slot = static_cast<std::size_t>(lv.slot_base + off);
    auto [lo, hi] = sys_.slot_range[slot];
    if (v < lo || v > hi)
        throw ModelingViolation{"assignment of " + std::to_string(v) + " to " +
                                sys_.slot_names[slot] + " violates range [" + std::to_string(lo) +
                                "," + std::to_string(hi) + "]"};
    disc_[slot] = static_cast<std::int32_t>(v);
}

void Evaluator::exec(const CStmt& s, std::vector<long>& frame, std::optional<long>& ret) {
    switch (s.kind) {
        case CStmt::Kind::Assign:
            store(s.lhs, eval(s.rhs), &frame);
            break;
        case CStmt::Kind::If:
            if (eval(s.cond))
                exec_body(s.then_body, frame, ret);
            else
                exec_body(s.else_body, frame, ret);
            break;
        case CStmt::Kind::For: {
            long lo = eval(s.lo);
            long hi = eval(s.hi);
            for (long v = lo; v <= hi && !ret; ++v) {
                frame[static_cast<std::size_t>(s.frame_off)] = v;
                exec_body(s.then_body, frame, ret);
            }
            break;
        }
        case CStmt::Kind::Return:
            ret = s.has_ret_value ? eval(s.cond) : 0;
            break;
        case CStmt::Kind::Local:
            frame[static_cast<std::size_t>(s.frame_off)] = s.has_init ? eval(s.init) : 0;
            break;
        case CStmt::Kind::Call:
            eval(s.rhs);
            break;
    }
}

int Evaluator::resolve_clock(const CClockRef& c) {
    if (!c.has_index) return c.base;
    long i = eval(c.index);
    int n = c.size == 0 ? 1 : c.size;
    if (i < 0 || i >= n)
        throw ModelingViolation{"clock index " + std::to_string(i) + " out of bounds"};
    return c.base + static_cast<int>(i);
}

void Evaluator::run_update(const CUpdate& u, const std::function<void(int)>& on_reset) {
    switch (u.kind) {
        case CUpdate::Kind::Assign:
            store(u.lhs, eval(u.rhs), cur_frame_);
            break;
        case CUpdate::Kind::Call: {
            std::vector<long> args;
            args.reserve(u.args.size());
            for (const auto& a : u.args) args.push_back(eval(a));
            call(u.fn, args);
            break;
        }
        case CUpdate::Kind::ResetClock:
            on_reset(resolve_clock(u.clock));
            break;
    }
}

}  // namespace creol2ta::analysis
