#include <algorithm>
#include <deque>
#include <limits>

#include "creol2ta/sched/scheduler.hpp"

namespace creol2ta::sched {

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Edf: return "edf";
        case Strategy::Fps: return "fps";
        case Strategy::Fcfs: return "fcfs";
    }
    return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& n) {
    if (n == "edf") return Strategy::Edf;
    if (n == "fps") return Strategy::Fps;
    if (n == "fcfs") return Strategy::Fcfs;
    return std::nullopt;
}

std::optional<long> queue_bound(long d_max, long b_min, DiagnosticList& diags) {
    if (b_min <= 0) {
        diags.error({}, "queue bound undefined: shortest completion time is zero");
        return std::nullopt;
    }
    return (d_max + b_min - 1) / b_min;
}

namespace {

long fold(const ta::ExprPtr& e, const ta::Declarations& globals) {
    auto v = ta::fold_constant(e, [&](const std::string& n) -> std::optional<long> {
        if (const long* c = globals.find_constant(n)) return *c;
        return std::nullopt;
    });
    return v.value_or(0);
}

// Largest constant assigned to `deadline` on an invoke-send edge.
void scan_deadlines(const ta::Template& t, const ta::Declarations& globals, long& d_max) {
    for (const auto& e : t.edges) {
        if (!e.sync || !e.sync->send || e.sync->channel != "invoke") continue;
        for (const auto& u : e.updates) {
            if (u.kind == ta::UpdateItem::Kind::Assign && u.lhs.name == "deadline")
                d_max = std::max(d_max, fold(u.rhs, globals));
        }
    }
}

// Shortest accumulated best-case time from every task entry to the final
// location. Delegate exits do not terminate the task; blocking waits pass
// through the initial location and continue on resume edges only.
std::optional<long> shortest_completion(const ta::Template& t, const ta::Declarations& globals,
                                        DiagnosticList& diags) {
    int l0 = t.initial;
    int final_loc = -1;
    for (const auto& e : t.edges)
        if (e.sync && e.sync->send && e.sync->channel == "finish") final_loc = e.src;
    if (final_loc < 0) {
        diags.error({}, "template '" + t.name + "' has no finish edge");
        return std::nullopt;
    }

    auto edge_weight = [&](const ta::Edge& e) {
        long w = 0;
        for (const auto& a : e.guard.atoms) {
            if (a.rel == ta::Rel::Ge || a.rel == ta::Rel::Gt)
                w = std::max(w, fold(a.bound, globals));
        }
        return w;
    };

    // Bellman-Ford style relaxation over the location graph.
    const long INF = std::numeric_limits<long>::max() / 4;
    std::map<int, long> dist;
    for (const auto& l : t.locations) dist[l.id] = INF;

    std::vector<int> entries;
    for (const auto& e : t.edges)
        if (e.sync && !e.sync->send && e.sync->channel == "start") entries.push_back(e.dst);
    for (int en : entries) dist[en] = 0;

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& e : t.edges) {
            if (e.sync && e.sync->send && e.sync->channel == "delegate") continue;  // release
            if (e.src == l0 && !(e.sync && !e.sync->send && e.sync->channel == "resume"))
                continue;  // from l0 only resume continues the same task
            long nd = dist[e.src] == INF ? INF : dist[e.src] + edge_weight(e);
            if (nd < dist[e.dst]) {
                dist[e.dst] = nd;
                changed = true;
            }
        }
    }
    if (dist[final_loc] == INF) {
        diags.error({}, "method automaton '" + t.name +
                            "' has no completion path (nonterminating body?)");
        return std::nullopt;
    }
    return dist[final_loc];
}

}  // namespace

TimingBounds extract_timing_bounds(const xlate::TranslationResult& tr,
                                   const std::vector<ta::Template>& environment,
                                   DiagnosticList& diags) {
    TimingBounds tb;
    tb.d_max = tr.deadlines.init;  // bootstrap tasks carry the initial deadline
    for (const auto& t : tr.templates) scan_deadlines(t, tr.globals, tb.d_max);
    for (const auto& t : environment) scan_deadlines(t, tr.globals, tb.d_max);

    long b_min = std::numeric_limits<long>::max();
    for (const auto& t : tr.templates) {
        auto c = shortest_completion(t, tr.globals, diags);
        if (c) b_min = std::min(b_min, *c);
    }
    tb.b_min = b_min == std::numeric_limits<long>::max() ? 0 : b_min;
    return tb;
}

}  // namespace creol2ta::sched
