#include "creol2ta/analysis/oracle.hpp"

#include <deque>
#include <unordered_set>

namespace creol2ta::analysis {

namespace {

struct OState {
    std::vector<std::uint16_t> locs;
    std::vector<std::int32_t> disc;
    std::vector<std::int32_t> clocks;  // [0] unused reference
    long elapsed = 0;                  // only tracked in time-bounded mode
};

std::string okey(const OState& s, bool track_elapsed) {
    std::string k;
    k.reserve(s.locs.size() * 2 + (s.disc.size() + s.clocks.size()) * 4 + 8);
    for (auto l : s.locs) {
        k.push_back(static_cast<char>(l & 0xff));
        k.push_back(static_cast<char>(l >> 8));
    }
    auto put = [&](std::int32_t v) {
        for (int b = 0; b < 4; ++b) k.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    };
    for (auto v : s.disc) put(v);
    for (auto v : s.clocks) put(v);
    if (track_elapsed) put(static_cast<std::int32_t>(s.elapsed));
    return k;
}

class OracleRun {
public:
    OracleRun(const CompiledSystem& sys, const OracleOptions& opts) : sys_(sys), opts_(opts) {}

    OracleResult run(const OraclePredicate& goal) {
        OracleResult res;

        // Scan once: strict atoms and difference atoms decide the mode.
        bool has_strict = false;
        has_diff_ = false;
        for (const auto& inst : sys_.instances) {
            auto scan = [&](const CAtom& a) {
                if (a.rel == ta::Rel::Lt || a.rel == ta::Rel::Gt) has_strict = true;
                if (a.has_minus) has_diff_ = true;
            };
            for (const auto& l : inst.locs)
                for (const auto& a : l.invariant) scan(a);
            for (const auto& e : inst.edges)
                for (const auto& a : e.atoms) scan(a);
        }
        if (has_strict && !opts_.allow_strict) {
            res.verdict = OracleVerdict::Refused;
            res.message = "system uses strict clock constraints";
            return res;
        }
        long needed = 0;
        for (auto m : sys_.max_const) needed = std::max(needed, static_cast<long>(m));
        if (opts_.horizon <= needed) {
            res.verdict = OracleVerdict::Refused;
            res.message = "horizon " + std::to_string(opts_.horizon) +
                          " not above the largest constant " + std::to_string(needed);
            return res;
        }

        OState init;
        for (const auto& inst : sys_.instances)
            init.locs.push_back(static_cast<std::uint16_t>(inst.initial));
        init.disc = sys_.init_disc;
        init.clocks.assign(static_cast<std::size_t>(sys_.n_clocks) + 1, 0);

        std::deque<OState> waiting;
        std::unordered_set<std::string> seen;
        auto push = [&](OState&& s) {
            if (!invariants_hold(s)) return;
            canonicalize_meta(s.disc);
            auto [it, fresh] = seen.insert(okey(s, has_diff_));
            (void)it;
            if (fresh) waiting.push_back(std::move(s));
        };
        push(std::move(init));

        try {
            while (!waiting.empty()) {
                OState cur = std::move(waiting.front());
                waiting.pop_front();
                OracleStateView view{cur.locs, cur.disc, cur.clocks};
                if (goal(view)) {
                    res.verdict = OracleVerdict::Reachable;
                    res.states = seen.size();
                    return res;
                }
                if (seen.size() >= opts_.state_budget) {
                    res.verdict = OracleVerdict::BudgetExhausted;
                    res.states = seen.size();
                    return res;
                }
                expand(cur, push);
            }
        } catch (const ModelingViolation& mv) {
            res.verdict = OracleVerdict::Refused;
            res.message = "modeling violation: " + mv.message;
            return res;
        }
        res.verdict = OracleVerdict::Unreachable;
        res.states = seen.size();
        return res;
    }

private:
    bool clock_sat(const OState& s, const CAtom& a, Evaluator& ev) const {
        if (a.has_when && !ev.eval(a.when)) return true;
        int i = ev.resolve_clock(a.left);
        long b = ev.eval(a.bound);
        long vi = s.clocks[static_cast<std::size_t>(i)];
        if (a.has_minus) {
            int j = ev.resolve_clock(a.minus);
            long vj = s.clocks[static_cast<std::size_t>(j)];
            long dvl = vi - vj;
            switch (a.rel) {
                case ta::Rel::Lt: return dvl < b;
                case ta::Rel::Le: return dvl <= b;
                case ta::Rel::Gt: return dvl > b;
                case ta::Rel::Ge: return dvl >= b;
                case ta::Rel::Eq: return dvl == b;
            }
            return true;
        }
        // With saturation, a capped clock is "at least horizon", above every
        // constant the model compares against.
        bool capped = !has_diff_ && vi >= opts_.horizon;
        switch (a.rel) {
            case ta::Rel::Lt: return !capped && vi < b;
            case ta::Rel::Le: return !capped && vi <= b;
            case ta::Rel::Gt: return capped || vi > b;
            case ta::Rel::Ge: return capped || vi >= b;
            case ta::Rel::Eq: return !capped && vi == b;
        }
        return true;
    }

    bool invariants_hold(OState& s) const {
        std::vector<std::int32_t> disc_copy = s.disc;
        Evaluator ev(sys_, disc_copy);
        for (std::size_t i = 0; i < sys_.instances.size(); ++i) {
            const CLoc& loc = sys_.instances[i].locs[s.locs[i]];
            for (const auto& a : loc.invariant)
                if (!clock_sat(s, a, ev)) return false;
        }
        return true;
    }

    bool committed_present(const OState& s) const {
        for (std::size_t i = 0; i < sys_.instances.size(); ++i)
            if (sys_.instances[i].locs[s.locs[i]].urgency == ta::Urgency::Committed) return true;
        return false;
    }

    void canonicalize_meta(std::vector<std::int32_t>& disc) const {
        for (std::size_t s = 0; s < disc.size(); ++s)
            if (sys_.slot_meta[s]) disc[s] = sys_.init_disc[s];
    }

    template <typename Push>
    void expand(const OState& cur, Push&& push) {
        bool committed = committed_present(cur);

        // internal edges
        for (std::size_t i = 0; i < sys_.instances.size(); ++i) {
            if (committed && sys_.instances[i].locs[cur.locs[i]].urgency != ta::Urgency::Committed)
                continue;
            for (int eidx : sys_.instances[i].internal_edges) {
                const CEdge& e = sys_.instances[i].edges[static_cast<std::size_t>(eidx)];
                if (cur.locs[i] != e.src) continue;
                OState next = cur;
                Evaluator ev(sys_, next.disc);
                if (e.has_guard && !ev.eval(e.guard)) continue;
                bool ok = true;
                for (const auto& a : e.atoms)
                    if (!clock_sat(cur, a, ev)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                for (const auto& u : e.updates)
                    ev.run_update(u, [&](int c) { next.clocks[static_cast<std::size_t>(c)] = 0; });
                next.locs[i] = static_cast<std::uint16_t>(e.dst);
                push(std::move(next));
            }
        }

        // synchronizations
        for (std::size_t c = 0; c < sys_.channels.size(); ++c) {
            for (auto [si, se] : sys_.senders[c]) {
                const CEdge& s = sys_.instances[si].edges[se];
                if (cur.locs[si] != s.src) continue;
                for (auto [ri, re] : sys_.receivers[c]) {
                    if (ri == si) continue;
                    const CEdge& r = sys_.instances[ri].edges[re];
                    if (cur.locs[ri] != r.src) continue;
                    if (committed) {
                        bool any =
                            sys_.instances[si].locs[cur.locs[si]].urgency ==
                                ta::Urgency::Committed ||
                            sys_.instances[ri].locs[cur.locs[ri]].urgency ==
                                ta::Urgency::Committed;
                        if (!any) continue;
                    }
                    OState next = cur;
                    Evaluator ev(sys_, next.disc);
                    if (s.has_guard && !ev.eval(s.guard)) continue;
                    if (r.has_guard && !ev.eval(r.guard)) continue;
                    bool match = true;
                    for (std::size_t k = 0; k < s.chan_idx.size(); ++k)
                        if (ev.eval(s.chan_idx[k]) != ev.eval(r.chan_idx[k])) {
                            match = false;
                            break;
                        }
                    if (!match) continue;
                    bool ok = true;
                    for (const auto& a : s.atoms)
                        if (!clock_sat(cur, a, ev)) {
                            ok = false;
                            break;
                        }
                    for (const auto& a : r.atoms)
                        if (ok && !clock_sat(cur, a, ev)) ok = false;
                    if (!ok) continue;
                    for (const auto& u : s.updates)
                        ev.run_update(u,
                                      [&](int cl) { next.clocks[static_cast<std::size_t>(cl)] = 0; });
                    for (const auto& u : r.updates)
                        ev.run_update(u,
                                      [&](int cl) { next.clocks[static_cast<std::size_t>(cl)] = 0; });
                    next.locs[si] = static_cast<std::uint16_t>(s.dst);
                    next.locs[ri] = static_cast<std::uint16_t>(r.dst);
                    push(std::move(next));
                }
            }
        }

        // unit delay
        if (!committed && delay_allowed(cur)) {
            if (has_diff_ && cur.elapsed >= opts_.horizon) return;  // time-bounded mode
            OState next = cur;
            for (std::size_t k = 1; k < next.clocks.size(); ++k) {
                if (has_diff_)
                    next.clocks[k] = next.clocks[k] + 1;
                else
                    next.clocks[k] =
                        std::min<std::int32_t>(next.clocks[k] + 1,
                                               static_cast<std::int32_t>(opts_.horizon));
            }
            if (has_diff_) next.elapsed = cur.elapsed + 1;
            push(std::move(next));
        }
    }

    bool delay_allowed(const OState& s) {
        for (std::size_t i = 0; i < sys_.instances.size(); ++i)
            if (sys_.instances[i].locs[s.locs[i]].urgency != ta::Urgency::Normal) return false;
        std::vector<std::int32_t> disc_copy = s.disc;
        Evaluator ev(sys_, disc_copy);
        for (std::size_t c = 0; c < sys_.channels.size(); ++c) {
            if (!sys_.channels[c].urgent) continue;
            for (auto [si, se] : sys_.senders[c]) {
                const CEdge& sedge = sys_.instances[si].edges[se];
                if (s.locs[si] != sedge.src) continue;
                if (sedge.has_guard && !ev.eval(sedge.guard)) continue;
                for (auto [ri, re] : sys_.receivers[c]) {
                    if (ri == si) continue;
                    const CEdge& redge = sys_.instances[ri].edges[re];
                    if (s.locs[ri] != redge.src) continue;
                    if (redge.has_guard && !ev.eval(redge.guard)) continue;
                    bool match = true;
                    for (std::size_t k = 0; k < sedge.chan_idx.size(); ++k)
                        if (ev.eval(sedge.chan_idx[k]) != ev.eval(redge.chan_idx[k])) {
                            match = false;
                            break;
                        }
                    if (match) return false;
                }
            }
        }
        return true;
    }

    const CompiledSystem& sys_;
    const OracleOptions& opts_;
    bool has_diff_ = false;
};

}  // namespace

OracleResult discrete_oracle(const CompiledSystem& sys, const OraclePredicate& goal,
                             const OracleOptions& opts) {
    return OracleRun(sys, opts).run(goal);
}

}  // namespace creol2ta::analysis
