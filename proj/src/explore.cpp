#include "creol2ta/analysis/explore.hpp"

#include <deque>
#include <sstream>
#include <unordered_map>

namespace creol2ta::analysis {

std::string verdict_name(VerdictKind v) {
    switch (v) {
        case VerdictKind::Reachable: return "reachable";
        case VerdictKind::Unreachable: return "unreachable";
        case VerdictKind::BudgetExhausted: return "budget-exhausted";
        case VerdictKind::ModelingError: return "modeling-error";
        case VerdictKind::AssertFailed: return "assertion-failed";
    }
    return "?";
}

namespace {

struct Node {
    std::vector<std::uint16_t> locs;
    std::vector<std::int32_t> disc;
    Zone zone;
    int parent = -1;
    TransitionDesc via;
};

struct KeyHash {
    std::size_t operator()(const std::string& k) const { return std::hash<std::string>{}(k); }
};

// Core stepping machinery shared by exploration and replay. Replay runs with
// extrapolation off and one extra, never-reset clock that tracks global time.
class Stepper {
public:
    Stepper(const CompiledSystem& sys, bool extrapolate, int extra_clocks)
        : sys_(sys), extrapolate_(extrapolate), n_clocks_(sys.n_clocks + extra_clocks) {
        if (extrapolate_) {
            max_.assign(static_cast<std::size_t>(n_clocks_) + 1, 0);
            for (std::size_t i = 0; i < sys.max_const.size(); ++i) max_[i] = sys.max_const[i];
            for (std::size_t i = sys.max_const.size(); i < max_.size(); ++i) max_[i] = 0;
        }
    }

    int n_clocks() const { return n_clocks_; }

    Node initial() const {
        Node n;
        n.locs.reserve(sys_.instances.size());
        for (const auto& inst : sys_.instances)
            n.locs.push_back(static_cast<std::uint16_t>(inst.initial));
        n.disc = sys_.init_disc;
        n.zone = Zone::zero(n_clocks_);
        n.via.kind = TransitionDesc::Kind::Initial;
        finish_zone(n);
        return n;
    }

    // Applies invariants, then the delay closure when permitted, then
    // invariants again and extrapolation. Returns false if the zone died.
    bool finish_zone(Node& n) const {
        std::vector<std::int32_t> disc_copy = n.disc;  // invariant eval is read-only
        Evaluator ev(sys_, disc_copy);
        if (!intersect_invariants(n, ev)) return false;
        if (delay_allowed(n, ev)) {
            n.zone.up();
            if (!intersect_invariants(n, ev)) return false;
        }
        if (extrapolate_) {
            n.zone.extrapolate(max_);
            n.zone.close();
        }
        return !n.zone.is_empty();
    }

    bool intersect_invariants(Node& n, Evaluator& ev) const {
        for (std::size_t i = 0; i < sys_.instances.size(); ++i) {
            const CLoc& loc = sys_.instances[i].locs[n.locs[i]];
            for (const auto& a : loc.invariant)
                if (!apply_atom(n.zone, a, ev)) return false;
        }
        return true;
    }

    bool apply_atom(Zone& z, const CAtom& a, Evaluator& ev) const {
        if (a.has_when && !ev.eval(a.when)) return !z.is_empty();
        int i = ev.resolve_clock(a.left);
        int j = a.has_minus ? ev.resolve_clock(a.minus) : 0;
        long b = ev.eval(a.bound);
        auto bound = static_cast<std::int32_t>(b);
        switch (a.rel) {
            case ta::Rel::Lt: return z.constrain(i, j, bound, true);
            case ta::Rel::Le: return z.constrain(i, j, bound, false);
            case ta::Rel::Gt: return z.constrain(j, i, -bound, true);
            case ta::Rel::Ge: return z.constrain(j, i, -bound, false);
            case ta::Rel::Eq:
                return z.constrain(i, j, bound, false) && z.constrain(j, i, -bound, false);
        }
        return true;
    }

    bool committed_present(const Node& n) const {
        for (std::size_t i = 0; i < sys_.instances.size(); ++i)
            if (sys_.instances[i].locs[n.locs[i]].urgency == ta::Urgency::Committed) return true;
        return false;
    }

    bool edge_discrete_enabled(const CEdge& e, Evaluator& ev) const {
        return !e.has_guard || ev.eval(e.guard) != 0;
    }

    // Time may pass unless an urgent or committed location is occupied or an
    // urgent-channel synchronization is enabled (their edges carry no clock
    // guards, so enabledness is a discrete matter).
    bool delay_allowed(const Node& n, Evaluator& ev) const {
        for (std::size_t i = 0; i < sys_.instances.size(); ++i) {
            auto u = sys_.instances[i].locs[n.locs[i]].urgency;
            if (u != ta::Urgency::Normal) return false;
        }
        for (std::size_t c = 0; c < sys_.channels.size(); ++c) {
            if (!sys_.channels[c].urgent) continue;
            for (auto [si, se] : sys_.senders[c]) {
                const CEdge& sedge = sys_.instances[si].edges[se];
                if (n.locs[si] != sedge.src) continue;
                if (!edge_discrete_enabled(sedge, ev)) continue;
                std::vector<long> sidx;
                for (const auto& ix : sedge.chan_idx) sidx.push_back(ev.eval(ix));
                for (auto [ri, re] : sys_.receivers[c]) {
                    if (ri == si) continue;
                    const CEdge& redge = sys_.instances[ri].edges[re];
                    if (n.locs[ri] != redge.src) continue;
                    if (!edge_discrete_enabled(redge, ev)) continue;
                    bool match = true;
                    for (std::size_t k = 0; k < sidx.size(); ++k)
                        if (ev.eval(redge.chan_idx[k]) != sidx[k]) {
                            match = false;
                            break;
                        }
                    if (match) return false;
                }
            }
        }
        return true;
    }

    // Fires an internal edge; returns the successor or nullopt.
    std::optional<Node> fire_internal(const Node& cur, int inst, int edge) const {
        const CEdge& e = sys_.instances[inst].edges[edge];
        if (cur.locs[inst] != e.src) return std::nullopt;
        Node next = cur;
        Evaluator ev(sys_, next.disc);
        if (committed_present(cur) &&
            sys_.instances[inst].locs[cur.locs[inst]].urgency != ta::Urgency::Committed)
            return std::nullopt;
        if (!edge_discrete_enabled(e, ev)) return std::nullopt;
        for (const auto& a : e.atoms)
            if (!apply_atom(next.zone, a, ev)) return std::nullopt;
        std::vector<int> resets;
        for (const auto& u : e.updates)
            ev.run_update(u, [&](int c) { resets.push_back(c); });
        for (int c : resets) next.zone.reset(c);
        next.locs[inst] = static_cast<std::uint16_t>(e.dst);
        canonicalize_meta(next.disc);
        TransitionDesc td;
        td.kind = TransitionDesc::Kind::Internal;
        td.inst_a = inst;
        td.edge_a = edge;
        next.via = td;
        if (!finish_zone(next)) return std::nullopt;
        return next;
    }

    std::optional<Node> fire_sync(const Node& cur, int si, int se, int ri, int re) const {
        const CEdge& s = sys_.instances[si].edges[se];
        const CEdge& r = sys_.instances[ri].edges[re];
        if (cur.locs[si] != s.src || cur.locs[ri] != r.src) return std::nullopt;
        if (committed_present(cur)) {
            bool any_committed =
                sys_.instances[si].locs[cur.locs[si]].urgency == ta::Urgency::Committed ||
                sys_.instances[ri].locs[cur.locs[ri]].urgency == ta::Urgency::Committed;
            if (!any_committed) return std::nullopt;
        }
        Node next = cur;
        Evaluator ev(sys_, next.disc);
        if (!edge_discrete_enabled(s, ev) || !edge_discrete_enabled(r, ev)) return std::nullopt;
        for (std::size_t k = 0; k < s.chan_idx.size(); ++k)
            if (ev.eval(s.chan_idx[k]) != ev.eval(r.chan_idx[k])) return std::nullopt;
        for (const auto& a : s.atoms)
            if (!apply_atom(next.zone, a, ev)) return std::nullopt;
        for (const auto& a : r.atoms)
            if (!apply_atom(next.zone, a, ev)) return std::nullopt;
        std::vector<int> resets;
        for (const auto& u : s.updates)  // sender updates first
            ev.run_update(u, [&](int c) { resets.push_back(c); });
        for (const auto& u : r.updates)
            ev.run_update(u, [&](int c) { resets.push_back(c); });
        for (int c : resets) next.zone.reset(c);
        next.locs[si] = static_cast<std::uint16_t>(s.dst);
        next.locs[ri] = static_cast<std::uint16_t>(r.dst);
        canonicalize_meta(next.disc);
        TransitionDesc td;
        td.kind = TransitionDesc::Kind::Sync;
        td.inst_a = si;
        td.edge_a = se;
        td.inst_b = ri;
        td.edge_b = re;
        next.via = td;
        if (!finish_zone(next)) return std::nullopt;
        return next;
    }

    // Deterministic successor enumeration: internal edges by (instance,
    // edge), then channel pairs by (channel, sender, receiver).
    template <typename Fn>
    void for_successors(const Node& cur, Fn&& emit) const {
        for (std::size_t i = 0; i < sys_.instances.size(); ++i)
            for (int e : sys_.instances[i].internal_edges)
                if (auto n = fire_internal(cur, static_cast<int>(i), e)) emit(std::move(*n));
        for (std::size_t c = 0; c < sys_.channels.size(); ++c) {
            for (auto [si, se] : sys_.senders[c]) {
                if (cur.locs[si] != sys_.instances[si].edges[se].src) continue;
                for (auto [ri, re] : sys_.receivers[c]) {
                    if (ri == si) continue;
                    if (auto n = fire_sync(cur, si, se, ri, re)) emit(std::move(*n));
                }
            }
        }
    }

    // Meta variables only carry a value across one synchronization; they are
    // reset to their initial value so state comparison ignores them.
    void canonicalize_meta(std::vector<std::int32_t>& disc) const {
        for (std::size_t s = 0; s < disc.size(); ++s)
            if (sys_.slot_meta[s]) disc[s] = sys_.init_disc[s];
    }

private:
    const CompiledSystem& sys_;
    bool extrapolate_;
    int n_clocks_;
    std::vector<std::int32_t> max_;
};

std::string state_key(const Node& n) {
    std::string k;
    k.reserve(n.locs.size() * 2 + n.disc.size() * 4);
    for (auto l : n.locs) {
        k.push_back(static_cast<char>(l & 0xff));
        k.push_back(static_cast<char>(l >> 8));
    }
    for (auto v : n.disc)
        for (int b = 0; b < 4; ++b) k.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    return k;
}

}  // namespace

ExploreResult explore(const CompiledSystem& sys, const Predicate& goal,
                      const ExploreOptions& opts) {
    ExploreResult res;
    Stepper step(sys, /*extrapolate=*/true, /*extra=*/0);

    std::deque<Node> nodes;
    std::unordered_map<std::string, std::vector<int>, KeyHash> passed;
    std::deque<int> waiting;

    auto build_trace = [&](int idx, std::vector<TransitionDesc>& out) {
        std::vector<TransitionDesc> rev;
        for (int cur = idx; cur >= 0; cur = nodes[static_cast<std::size_t>(cur)].parent) {
            if (nodes[static_cast<std::size_t>(cur)].via.kind != TransitionDesc::Kind::Initial)
                rev.push_back(nodes[static_cast<std::size_t>(cur)].via);
        }
        out.assign(rev.rbegin(), rev.rend());
    };

    auto watch = [&](const Node& n) {
        if (opts.watch_slot >= 0)
            res.watch_max =
                std::max(res.watch_max, static_cast<long>(n.disc[static_cast<std::size_t>(
                                            opts.watch_slot)]));
    };

    // Returns the stored node index, or -1 when subsumed by a passed state.
    auto store = [&](Node&& n, int parent) -> int {
        n.parent = parent;
        std::string key = state_key(n);
        auto& zones = passed[key];
        for (int zi : zones)
            if (nodes[static_cast<std::size_t>(zi)].zone.includes(n.zone)) return -1;
        std::erase_if(zones, [&](int zi) {
            return n.zone.includes(nodes[static_cast<std::size_t>(zi)].zone);
        });
        int idx = static_cast<int>(nodes.size());
        nodes.push_back(std::move(n));
        zones.push_back(idx);
        watch(nodes.back());
        return idx;
    };

    try {
        Node init = step.initial();
        if (init.zone.is_empty()) {
            res.verdict = VerdictKind::Unreachable;
            return res;
        }
        int idx = store(std::move(init), -1);
        if (idx >= 0) waiting.push_back(idx);

        while (!waiting.empty()) {
            int cur = waiting.front();
            waiting.pop_front();
            const Node& node = nodes[static_cast<std::size_t>(cur)];

            StateView view{node.locs, node.disc, node.zone};
            if (opts.state_assert) {
                if (auto msg = opts.state_assert(view)) {
                    res.verdict = VerdictKind::AssertFailed;
                    res.message = *msg;
                    build_trace(cur, res.trace);
                    res.states = nodes.size();
                    return res;
                }
            }
            if (goal(view)) {
                res.verdict = VerdictKind::Reachable;
                build_trace(cur, res.trace);
                res.states = nodes.size();
                return res;
            }
            if (nodes.size() >= opts.state_budget) {
                res.verdict = VerdictKind::BudgetExhausted;
                res.states = nodes.size();
                res.message = "state budget of " + std::to_string(opts.state_budget) +
                              " symbolic states exhausted";
                return res;
            }

            std::vector<Node> succs;
            step.for_successors(node, [&](Node&& n) { succs.push_back(std::move(n)); });
            ++res.transitions;
            for (auto& n : succs) {
                int ni = store(std::move(n), cur);
                if (ni >= 0) waiting.push_back(ni);
            }
        }
        res.verdict = VerdictKind::Unreachable;
        res.states = nodes.size();
        return res;
    } catch (const ModelingViolation& mv) {
        res.verdict = VerdictKind::ModelingError;
        res.message = mv.message;
        res.states = nodes.size();
        return res;
    }
}

std::optional<std::vector<ReplayStep>> replay(const CompiledSystem& sys,
                                              const std::vector<TransitionDesc>& trace) {
    Stepper step(sys, /*extrapolate=*/false, /*extra=*/1);
    int tclock = step.n_clocks();  // the trailing global-time clock

    Node cur = step.initial();
    if (cur.zone.is_empty()) return std::nullopt;

    std::vector<ReplayStep> out;
    auto snapshot = [&](const Node& n, const TransitionDesc& d) {
        ReplayStep rs;
        rs.desc = d;
        rs.locs = n.locs;
        rs.disc = n.disc;
        rs.zone = n.zone;
        raw_t hi = n.zone.at(tclock, 0);
        raw_t lo = n.zone.at(0, tclock);
        rs.time_lo = -raw_bound(lo);
        rs.time_hi = hi >= kRawInf ? -1 : raw_bound(hi);
        out.push_back(std::move(rs));
    };
    snapshot(cur, cur.via);

    for (const auto& td : trace) {
        std::optional<Node> next;
        if (td.kind == TransitionDesc::Kind::Internal)
            next = step.fire_internal(cur, td.inst_a, td.edge_a);
        else if (td.kind == TransitionDesc::Kind::Sync)
            next = step.fire_sync(cur, td.inst_a, td.edge_a, td.inst_b, td.edge_b);
        if (!next) return std::nullopt;
        cur = std::move(*next);
        snapshot(cur, td);
    }
    return out;
}

std::string describe_transition(const CompiledSystem& sys, const TransitionDesc& t) {
    std::ostringstream os;
    auto edge_note = [&](int inst, int edge) -> std::string {
        const CInstance& ci = sys.instances[static_cast<std::size_t>(inst)];
        const ta::Template* tmpl = sys.model->find_template(ci.template_name);
        int te = ci.edges[static_cast<std::size_t>(edge)].tmpl_edge;
        if (tmpl && te >= 0 && te < static_cast<int>(tmpl->edges.size())) {
            const ta::Edge& e = tmpl->edges[static_cast<std::size_t>(te)];
            std::string txt = ci.name + ": " +
                              ci.locs[static_cast<std::size_t>(e.src >= 0 ? 0 : 0)].name;
            (void)txt;
            std::string sync = e.sync ? " " + to_string(*e.sync) : "";
            std::string note = e.note.empty() ? "" : " (" + e.note + ")";
            const ta::Location* src = tmpl->find_location(e.src);
            const ta::Location* dst = tmpl->find_location(e.dst);
            return ci.name + " " + (src ? src->name : "?") + " -> " + (dst ? dst->name : "?") +
                   sync + note;
        }
        return ci.name + " edge#" + std::to_string(edge);
    };
    switch (t.kind) {
        case TransitionDesc::Kind::Initial:
            os << "initial";
            break;
        case TransitionDesc::Kind::Internal:
            os << edge_note(t.inst_a, t.edge_a);
            break;
        case TransitionDesc::Kind::Sync:
            os << edge_note(t.inst_a, t.edge_a) << "  ||  " << edge_note(t.inst_b, t.edge_b);
            break;
    }
    return os.str();
}

}  // namespace creol2ta::analysis
