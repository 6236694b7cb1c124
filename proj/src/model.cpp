#include "creol2ta/ta/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "creol2ta/analysis/dbm.hpp"

namespace creol2ta::ta {

std::string rel_text(Rel r) {
    switch (r) {
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Eq: return "==";
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
    }
    return "?";
}

std::string to_string(const ClockRef& c) {
    if (!c.index) return c.clock;
    return c.clock + "[" + to_string(c.index) + "]";
}

std::string to_string(const ClockAtom& a) {
    std::ostringstream os;
    if (a.when) os << "(" << to_string(a.when) << ") -> ";
    os << to_string(a.left);
    if (a.minus) os << " - " << to_string(*a.minus);
    os << " " << rel_text(a.rel) << " " << to_string(a.bound);
    return os.str();
}

std::string to_string(const Guard& g) {
    std::ostringstream os;
    bool first = true;
    if (g.discrete) {
        os << to_string(g.discrete);
        first = false;
    }
    for (const auto& a : g.atoms) {
        if (!first) os << " && ";
        first = false;
        os << to_string(a);
    }
    if (first) os << "true";
    return os.str();
}

std::string to_string(const Sync& s) {
    std::ostringstream os;
    os << s.channel;
    for (const auto& i : s.indices) os << "[" << to_string(i) << "]";
    os << (s.send ? "!" : "?");
    return os.str();
}

UpdateItem UpdateItem::assign(LValue lv, ExprPtr e) {
    UpdateItem u;
    u.kind = Kind::Assign;
    u.lhs = std::move(lv);
    u.rhs = std::move(e);
    return u;
}

UpdateItem UpdateItem::call(std::string fn, std::vector<ExprPtr> args) {
    UpdateItem u;
    u.kind = Kind::Call;
    u.fn = std::move(fn);
    u.args = std::move(args);
    return u;
}

UpdateItem UpdateItem::reset(ClockRef c) {
    UpdateItem u;
    u.kind = Kind::ResetClock;
    u.clock = std::move(c);
    return u;
}

std::string to_string(const UpdateItem& u) {
    switch (u.kind) {
        case UpdateItem::Kind::Assign:
            return to_string(u.lhs) + " = " + to_string(u.rhs);
        case UpdateItem::Kind::Call: {
            std::string s = u.fn + "(";
            for (std::size_t i = 0; i < u.args.size(); ++i) {
                if (i) s += ", ";
                s += to_string(u.args[i]);
            }
            return s + ")";
        }
        case UpdateItem::Kind::ResetClock:
            return to_string(u.clock) + " = 0";
    }
    return {};
}

const long* Declarations::find_constant(const std::string& n) const {
    for (const auto& [name, v] : constants)
        if (name == n) return &v;
    return nullptr;
}
const VarDecl* Declarations::find_var(const std::string& n) const {
    for (const auto& v : vars)
        if (v.name == n) return &v;
    return nullptr;
}
const ClockDecl* Declarations::find_clock(const std::string& n) const {
    for (const auto& c : clocks)
        if (c.name == n) return &c;
    return nullptr;
}
const ChanDecl* Declarations::find_channel(const std::string& n) const {
    for (const auto& c : channels)
        if (c.name == n) return &c;
    return nullptr;
}
const FuncDef* Declarations::find_function(const std::string& n) const {
    for (const auto& f : functions)
        if (f.name == n) return &f;
    return nullptr;
}

std::string to_string(const Declarations& d) {
    std::ostringstream os;
    for (const auto& [n, v] : d.constants) os << "const int " << n << " = " << v << ";\n";
    for (const auto& c : d.clocks) {
        os << "clock " << c.name;
        if (c.size > 0) os << "[" << c.size << "]";
        os << ";\n";
    }
    for (const auto& v : d.vars) {
        if (v.meta) os << "meta ";
        if (v.is_const) os << "const ";
        if (v.is_bool)
            os << "bool " << v.name;
        else
            os << "int[" << v.lo << "," << v.hi << "] " << v.name;
        for (int dim : v.dims) os << "[" << dim << "]";
        if (!v.init.empty()) {
            if (v.dims.empty()) {
                os << " = " << (v.is_bool ? (v.init[0] ? "true" : "false") : std::to_string(v.init[0]));
            } else {
                // Flattened initializer rendered with nesting for the
                // outermost dimension only; inner dims repeat.
                std::function<void(std::size_t, std::size_t&)> emit =
                    [&](std::size_t dim_idx, std::size_t& pos) {
                        os << "{";
                        int n = v.dims[dim_idx];
                        for (int k = 0; k < n; ++k) {
                            if (k) os << ", ";
                            if (dim_idx + 1 == v.dims.size()) {
                                long val = v.init[pos++];
                                if (v.is_bool)
                                    os << (val ? "true" : "false");
                                else
                                    os << val;
                            } else {
                                emit(dim_idx + 1, pos);
                            }
                        }
                        os << "}";
                    };
                std::size_t pos = 0;
                os << " = ";
                emit(0, pos);
            }
        }
        os << ";\n";
    }
    for (const auto& c : d.channels) {
        if (c.urgent) os << "urgent ";
        os << "chan " << c.name;
        for (int dim : c.dims) os << "[" << dim << "]";
        os << ";\n";
    }
    for (const auto& f : d.functions) os << to_string(f);
    return os.str();
}

const Location* Template::find_location(int id) const {
    for (const auto& l : locations)
        if (l.id == id) return &l;
    return nullptr;
}

const Location* Template::find_location_by_name(const std::string& n) const {
    for (const auto& l : locations)
        if (l.name == n) return &l;
    return nullptr;
}

const Template* SystemModel::find_template(const std::string& n) const {
    for (const auto& t : templates)
        if (t.name == n) return &t;
    return nullptr;
}

// -- builder -----------------------------------------------------------------

TemplateBuilder& TemplateBuilder::arg(std::string name) {
    tmpl_.args.push_back(std::move(name));
    return *this;
}

int TemplateBuilder::add_location(std::string name, Urgency u) {
    for (const auto& l : tmpl_.locations)
        if (l.name == name) throw BuildError("duplicate location name '" + name + "'");
    Location loc;
    loc.id = next_id_++;
    loc.name = std::move(name);
    loc.urgency = u;
    tmpl_.locations.push_back(std::move(loc));
    return tmpl_.locations.back().id;
}

void TemplateBuilder::set_initial(int id) {
    if (!tmpl_.find_location(id)) throw BuildError("initial location id not found");
    tmpl_.initial = id;
}

void TemplateBuilder::set_invariant(int id, std::vector<ClockAtom> inv) {
    for (auto& l : tmpl_.locations)
        if (l.id == id) {
            l.invariant = std::move(inv);
            return;
        }
    throw BuildError("set_invariant: unknown location id");
}

void TemplateBuilder::add_invariant_atom(int id, ClockAtom a) {
    for (auto& l : tmpl_.locations)
        if (l.id == id) {
            l.invariant.push_back(std::move(a));
            return;
        }
    throw BuildError("add_invariant_atom: unknown location id");
}

Edge& TemplateBuilder::add_edge(int src, int dst) {
    if (!tmpl_.find_location(src) || !tmpl_.find_location(dst))
        throw BuildError("edge endpoint not found in template '" + tmpl_.name + "'");
    Edge e;
    e.src = src;
    e.dst = dst;
    tmpl_.edges.push_back(std::move(e));
    return tmpl_.edges.back();
}

Template TemplateBuilder::finalize() {
    if (tmpl_.locations.empty()) throw BuildError("template '" + tmpl_.name + "' has no locations");
    if (tmpl_.initial < 0) throw BuildError("template '" + tmpl_.name + "' has no initial location");
    return tmpl_;
}

// -- well_formed ---------------------------------------------------------------

namespace {

struct Scope {
    const Declarations* globals;
    const Template* tmpl;  // may be null

    const VarDecl* var(const std::string& n) const {
        if (tmpl)
            if (auto* v = tmpl->locals.find_var(n)) return v;
        return globals->find_var(n);
    }
    const ClockDecl* clock(const std::string& n) const {
        if (tmpl)
            if (auto* c = tmpl->locals.find_clock(n)) return c;
        return globals->find_clock(n);
    }
    bool is_constant(const std::string& n) const {
        if (tmpl) {
            if (tmpl->locals.find_constant(n)) return true;
            for (const auto& a : tmpl->args)
                if (a == n) return true;
        }
        return globals->find_constant(n) != nullptr;
    }
    const FuncDef* function(const std::string& n) const {
        if (tmpl)
            if (auto* f = tmpl->locals.find_function(n)) return f;
        return globals->find_function(n);
    }
};

class Checker {
public:
    Checker(const SystemModel& sys, DiagnosticList& diags) : sys_(sys), diags_(diags) {}

    void run() {
        check_declarations(sys_.globals, "global");
        std::set<std::string> tnames;
        for (const auto& t : sys_.templates) {
            if (!tnames.insert(t.name).second)
                err("duplicate template name '" + t.name + "'");
            check_template(t);
        }
        std::set<std::string> inames;
        for (const auto& inst : sys_.instances) {
            if (!inames.insert(inst.name).second)
                err("duplicate instance name '" + inst.name + "'");
            const Template* t = sys_.find_template(inst.template_name);
            if (!t) {
                err("instance '" + inst.name + "' refers to unknown template '" +
                    inst.template_name + "'");
                continue;
            }
            if (inst.args.size() != t->args.size())
                err("instance '" + inst.name + "' passes " + std::to_string(inst.args.size()) +
                    " argument(s), template '" + t->name + "' expects " +
                    std::to_string(t->args.size()));
        }
    }

private:
    void err(std::string m) { diags_.error({}, std::move(m)); }

    void check_declarations(const Declarations& d, const std::string& where) {
        std::set<std::string> names;
        auto uniq = [&](const std::string& n, const char* kind) {
            if (!names.insert(n).second)
                err(where + " declarations: duplicate name '" + n + "' (" + kind + ")");
        };
        for (const auto& [n, v] : d.constants) {
            (void)v;
            uniq(n, "constant");
        }
        for (const auto& c : d.clocks) uniq(c.name, "clock");
        for (const auto& v : d.vars) {
            uniq(v.name, "variable");
            if (v.lo > v.hi) err("variable '" + v.name + "' has empty range");
            if (!v.init.empty() &&
                static_cast<long>(v.init.size()) != v.flat_size())
                err("variable '" + v.name + "' initializer size mismatch");
            for (long x : v.init)
                if (x < v.lo || x > v.hi)
                    err("variable '" + v.name + "' initializer out of range");
            if (v.init.empty() && (0 < v.lo || 0 > v.hi))
                err("variable '" + v.name + "' defaults to 0 which is outside [" +
                    std::to_string(v.lo) + "," + std::to_string(v.hi) + "]");
        }
        for (const auto& c : d.channels) uniq(c.name, "channel");
        for (const auto& f : d.functions) uniq(f.name, "function");
    }

    void check_expr(const ExprPtr& e, const Scope& sc, const std::string& where,
                    const std::set<std::string>& extra = {}) {
        if (!e) return;
        switch (e->kind) {
            case Expr::Kind::Name:
                if (!sc.is_constant(e->name) && !sc.var(e->name) && !extra.count(e->name))
                    err(where + ": unknown name '" + e->name + "'");
                break;
            case Expr::Kind::Index: {
                const VarDecl* v = sc.var(e->name);
                if (!v)
                    err(where + ": unknown array '" + e->name + "'");
                else if (v->dims.size() != e->args.size())
                    err(where + ": array '" + e->name + "' expects " +
                        std::to_string(v->dims.size()) + " index(es)");
                break;
            }
            case Expr::Kind::Call: {
                const FuncDef* f = sc.function(e->name);
                if (!f)
                    err(where + ": unknown function '" + e->name + "'");
                else if (f->params.size() != e->args.size())
                    err(where + ": function '" + e->name + "' arity mismatch");
                break;
            }
            default:
                break;
        }
        for (const auto& a : e->args) check_expr(a, sc, where, extra);
    }

    void check_clock_ref(const ClockRef& c, const Scope& sc, const std::string& where) {
        const ClockDecl* d = sc.clock(c.clock);
        if (!d) {
            err(where + ": unknown clock '" + c.clock + "'");
            return;
        }
        if (d->size == 0 && c.index) err(where + ": clock '" + c.clock + "' is scalar");
        if (d->size > 0 && !c.index) err(where + ": clock '" + c.clock + "' needs an index");
        check_expr(c.index, sc, where);
    }

    void check_atom(const ClockAtom& a, const Scope& sc, const std::string& where) {
        check_clock_ref(a.left, sc, where);
        if (a.minus) check_clock_ref(*a.minus, sc, where);
        check_expr(a.bound, sc, where);
        check_expr(a.when, sc, where);
    }

    void check_function(const FuncDef& f, const Scope& sc, const std::string& where) {
        std::set<std::string> locals(f.params.begin(), f.params.end());
        std::function<void(const FuncBody&)> walk = [&](const FuncBody& b) {
            for (const auto& s : b.stmts) {
                switch (s.kind) {
                    case FuncStmt::Kind::Local:
                        locals.insert(s.var);
                        check_expr(s.init, sc, where, locals);
                        break;
                    case FuncStmt::Kind::Assign:
                        if (!locals.count(s.lhs.name) && !sc.var(s.lhs.name))
                            err(where + ": assignment to unknown '" + s.lhs.name + "'");
                        for (const auto& i : s.lhs.indices) check_expr(i, sc, where, locals);
                        check_expr(s.rhs, sc, where, locals);
                        break;
                    case FuncStmt::Kind::If:
                        check_expr(s.cond, sc, where, locals);
                        walk(s.then_body);
                        walk(s.else_body);
                        break;
                    case FuncStmt::Kind::For:
                        locals.insert(s.var);
                        check_expr(s.lo, sc, where, locals);
                        check_expr(s.hi, sc, where, locals);
                        walk(s.then_body);
                        break;
                    case FuncStmt::Kind::Return:
                        check_expr(s.cond, sc, where, locals);
                        break;
                    case FuncStmt::Kind::CallStmt:
                        check_expr(s.rhs, sc, where, locals);
                        break;
                }
            }
        };
        walk(f.body);
    }

    void check_template(const Template& t) {
        check_declarations(t.locals, "template " + t.name);
        Scope sc{&sys_.globals, &t};

        if (t.initial < 0 || !t.find_location(t.initial))
            err("template '" + t.name + "' has no initial location");
        std::set<int> ids;
        std::set<std::string> lnames;
        for (const auto& l : t.locations) {
            if (!ids.insert(l.id).second)
                err("template '" + t.name + "': duplicate location id " + std::to_string(l.id));
            if (!l.name.empty() && !lnames.insert(l.name).second)
                err("template '" + t.name + "': duplicate location name '" + l.name + "'");
            for (const auto& a : l.invariant) {
                if (a.minus)
                    err("template '" + t.name + "': invariant at '" + l.name +
                        "' uses a clock difference");
                if (a.rel != Rel::Le && a.rel != Rel::Lt)
                    err("template '" + t.name + "': invariant at '" + l.name +
                        "' is not an upper bound");
                check_atom(a, sc, "template " + t.name + " invariant");
            }
        }
        for (const auto& f : t.locals.functions) check_function(f, sc, "template " + t.name);
        for (const auto& f : sys_.globals.functions) {
            // Global functions are checked once in global scope.
            (void)f;
        }

        std::size_t ei = 0;
        for (const auto& e : t.edges) {
            std::string where = "template " + t.name + " edge #" + std::to_string(ei++);
            if (!t.find_location(e.src) || !t.find_location(e.dst))
                err(where + ": dangling endpoint");
            check_expr(e.guard.discrete, sc, where);
            for (const auto& a : e.guard.atoms) check_atom(a, sc, where);
            if (e.sync) {
                const ChanDecl* ch = sys_.globals.find_channel(e.sync->channel);
                if (!ch) {
                    err(where + ": unknown channel '" + e.sync->channel + "'");
                } else {
                    if (ch->dims.size() != e.sync->indices.size())
                        err(where + ": channel '" + ch->name + "' expects " +
                            std::to_string(ch->dims.size()) + " index(es)");
                    if (ch->urgent && !e.guard.atoms.empty())
                        err(where + ": urgent channel edge must not constrain clocks");
                }
                for (const auto& i : e.sync->indices) check_expr(i, sc, where);
            }
            for (const auto& u : e.updates) {
                switch (u.kind) {
                    case UpdateItem::Kind::Assign: {
                        const VarDecl* v = sc.var(u.lhs.name);
                        if (!v)
                            err(where + ": assignment to unknown variable '" + u.lhs.name + "'");
                        else if (v->dims.size() != u.lhs.indices.size())
                            err(where + ": variable '" + u.lhs.name + "' index count mismatch");
                        for (const auto& i : u.lhs.indices) check_expr(i, sc, where);
                        check_expr(u.rhs, sc, where);
                        break;
                    }
                    case UpdateItem::Kind::Call: {
                        const FuncDef* f = sc.function(u.fn);
                        if (!f)
                            err(where + ": unknown function '" + u.fn + "'");
                        else if (f->params.size() != u.args.size())
                            err(where + ": function '" + u.fn + "' arity mismatch");
                        for (const auto& a : u.args) check_expr(a, sc, where);
                        break;
                    }
                    case UpdateItem::Kind::ResetClock:
                        check_clock_ref(u.clock, sc, where);
                        break;
                }
            }
        }
    }

    const SystemModel& sys_;
    DiagnosticList& diags_;
};

}  // namespace

DiagnosticList well_formed(const SystemModel& sys) {
    DiagnosticList diags;
    Checker(sys, diags).run();
    return diags;
}

// -- determinism ---------------------------------------------------------------

namespace {

// Maps the clock references appearing in two guards onto dense DBM indices.
struct ClockIndexer {
    std::map<std::string, int> by_text;
    int next = 1;

    int index_of(const ClockRef& c, const EvalEnv& env) {
        std::string key = c.clock;
        if (c.index) {
            auto v = eval(*c.index, env);
            key += "[" + (v ? std::to_string(*v) : to_string(c.index)) + "]";
        }
        auto [it, inserted] = by_text.emplace(key, next);
        if (inserted) ++next;
        return it->second;
    }
};

bool add_atom(analysis::Zone& z, int i, int j, Rel rel, long bound) {
    auto b = static_cast<std::int32_t>(bound);
    switch (rel) {
        case Rel::Lt: return z.constrain(i, j, b, true);
        case Rel::Le: return z.constrain(i, j, b, false);
        case Rel::Gt: return z.constrain(j, i, -b, true);
        case Rel::Ge: return z.constrain(j, i, -b, false);
        case Rel::Eq: return z.constrain(i, j, b, false) && z.constrain(j, i, -b, false);
    }
    return true;
}

// Same action: both internal, or both synchronizations on the same channel,
// direction and (constant-foldable) indices.
bool same_action(const Edge& a, const Edge& b, const EvalEnv& env) {
    if (!a.sync && !b.sync) return true;
    if (!a.sync || !b.sync) return false;
    if (a.sync->channel != b.sync->channel || a.sync->send != b.sync->send) return false;
    if (a.sync->indices.size() != b.sync->indices.size()) return false;
    for (std::size_t k = 0; k < a.sync->indices.size(); ++k) {
        auto va = eval(*a.sync->indices[k], env);
        auto vb = eval(*b.sync->indices[k], env);
        if (va && vb) {
            if (*va != *vb) return false;
        } else if (to_string(a.sync->indices[k]) != to_string(b.sync->indices[k])) {
            return false;
        }
    }
    return true;
}

}  // namespace

DeterminismResult check_deterministic(const Template& tmpl, const SystemModel& sys) {
    DeterminismResult res;

    EvalEnv cenv;
    cenv.name_lookup = [&](const std::string& n) -> std::optional<long> {
        if (const long* v = tmpl.locals.find_constant(n)) return *v;
        if (const long* v = sys.globals.find_constant(n)) return *v;
        return std::nullopt;
    };

    // Finite-domain variables referenced by both guards are enumerated; the
    // clock parts are conjoined on a DBM per valuation.
    for (std::size_t i = 0; i < tmpl.edges.size(); ++i) {
        for (std::size_t j = i + 1; j < tmpl.edges.size(); ++j) {
            const Edge& a = tmpl.edges[i];
            const Edge& b = tmpl.edges[j];
            if (a.src != b.src) continue;
            if (!same_action(a, b, cenv)) continue;

            // Collect bounded variables mentioned by either discrete guard.
            std::vector<std::string> names;
            collect_names(a.guard.discrete, names);
            collect_names(b.guard.discrete, names);
            std::sort(names.begin(), names.end());
            names.erase(std::unique(names.begin(), names.end()), names.end());
            std::vector<const VarDecl*> dom;
            bool enumerable = true;
            for (const auto& n : names) {
                if (cenv.name_lookup(n)) continue;
                const VarDecl* v = tmpl.locals.find_var(n);
                if (!v) v = sys.globals.find_var(n);
                if (!v || !v->dims.empty()) {
                    enumerable = false;  // arrays / unknowns: assume overlap possible
                    break;
                }
                dom.push_back(v);
            }

            long combos = 1;
            if (enumerable) {
                for (const auto* v : dom) {
                    combos *= (v->hi - v->lo + 1);
                    if (combos > 100000) {
                        enumerable = false;
                        break;
                    }
                }
            }

            auto clocks_overlap = [&](const EvalEnv& env) {
                ClockIndexer idx;
                // Pre-index to know the dimension.
                std::vector<std::tuple<int, int, Rel, long>> constraints;
                bool ok = true;
                auto add = [&](const ClockAtom& atom) {
                    if (atom.when) {
                        auto w = eval(*atom.when, env);
                        if (w && !*w) return;
                    }
                    auto bv = eval(*atom.bound, env);
                    if (!bv) {
                        ok = false;
                        return;
                    }
                    int l = idx.index_of(atom.left, env);
                    int m = atom.minus ? idx.index_of(*atom.minus, env) : 0;
                    constraints.emplace_back(l, m, atom.rel, *bv);
                };
                for (const auto& atom : a.guard.atoms) add(atom);
                for (const auto& atom : b.guard.atoms) add(atom);
                if (!ok) return true;  // cannot decide: report overlap
                analysis::Zone z = analysis::Zone::universe(idx.next - 1);
                for (auto& [l, m, rel, bound] : constraints)
                    if (!add_atom(z, l, m, rel, bound)) return false;
                return !z.is_empty();
            };

            bool overlap = false;
            if (!enumerable) {
                // Conservative: if the discrete parts cannot be enumerated,
                // only disjoint clock constraints prove determinism.
                overlap = clocks_overlap(cenv);
            } else {
                std::vector<long> vals(dom.size());
                std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
                    if (k == dom.size()) {
                        EvalEnv env = cenv;
                        env.name_lookup = [&](const std::string& n) -> std::optional<long> {
                            for (std::size_t q = 0; q < dom.size(); ++q)
                                if (dom[q]->name == n) return vals[q];
                            return cenv.name_lookup(n);
                        };
                        auto ga = a.guard.discrete ? eval(*a.guard.discrete, env) : 1;
                        auto gb = b.guard.discrete ? eval(*b.guard.discrete, env) : 1;
                        if (!ga || !gb) return true;  // unresolvable: assume overlap
                        if (!*ga || !*gb) return false;
                        return clocks_overlap(env);
                    }
                    for (long v = dom[k]->lo; v <= dom[k]->hi; ++v) {
                        vals[k] = v;
                        if (rec(k + 1)) return true;
                    }
                    return false;
                };
                overlap = rec(0);
            }

            if (overlap) {
                res.deterministic = false;
                res.edge_a = static_cast<int>(i);
                res.edge_b = static_cast<int>(j);
                res.reason = "edges #" + std::to_string(i) + " and #" + std::to_string(j) +
                             " from location " + std::to_string(a.src) +
                             " share action and their guards overlap";
                return res;
            }
        }
    }
    return res;
}

}  // namespace creol2ta::ta
