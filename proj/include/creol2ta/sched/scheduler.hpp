#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "creol2ta/diag.hpp"
#include "creol2ta/ta/model.hpp"
#include "creol2ta/xlate/translate.hpp"

namespace creol2ta::sched {

enum class Strategy { Edf, Fps, Fcfs };

std::string strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& n);

struct SchedulerConfig {
    Strategy strategy = Strategy::Edf;
    /// Queue capacity; tasks beyond it overflow into the Error location.
    int max_queue = 1;
    /// Fixed priorities by task name (smaller value = served earlier).
    /// Subtasks fall back to their owning method's priority.
    std::map<std::string, int> priorities;
    /// Deadline misses use x >= d when false (a task must finish strictly
    /// before its deadline) and x > d when true.
    bool miss_strict = false;
};

/// Builds the parametric scheduler automaton for one object: queue arrays,
/// shared clock pool, bootstrap of init/run, insertion on invoke/delegate,
/// reply bookkeeping, blocking waits with local synchronous calls, the
/// strategy-guarded context switch and the Error location for overflows and
/// deadline misses. The edge `note` fields document the t1..t13 mapping.
ta::Template build_scheduler(const xlate::TranslationResult& tr, const SchedulerConfig& config,
                             DiagnosticList& diags);

/// Extra global declarations the scheduler relies on (MAX, EMPTY, NONE).
void add_scheduler_globals(ta::Declarations& globals, const SchedulerConfig& config);

/// ceil(d_max / b_min); the queue length that makes overflow equivalent to
/// nonschedulability. b_min must be positive.
std::optional<long> queue_bound(long d_max, long b_min, DiagnosticList& diags);

struct TimingBounds {
    long d_max = 0;  // largest deadline on any invoke edge (+ the initial deadline)
    long b_min = 0;  // shortest best-case completion time over all task entries
};

/// Scans method templates (and optionally environment templates) for the
/// largest deadline written on an invoke edge, and computes the shortest
/// accumulated best-case guard sum over completion paths (entry to the final
/// location, delegate edges excluded; waits continue through the initial
/// location via resume).
TimingBounds extract_timing_bounds(const xlate::TranslationResult& tr,
                                   const std::vector<ta::Template>& environment,
                                   DiagnosticList& diags);

}  // namespace creol2ta::sched
