#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "creol2ta/analysis/compiled.hpp"
#include "creol2ta/analysis/dbm.hpp"

namespace creol2ta::analysis {

// Zone-graph reachability over the compiled network. States are
// (location vector, discrete valuation, zone); zones are kept delay-closed
// under the urgency rules and extrapolated with per-clock max constants.
// Exploration is breadth-first over a stable transition ordering, so traces
// are shortest-by-steps and reproducible.

struct StateView {
    const std::vector<std::uint16_t>& locs;
    const std::vector<std::int32_t>& disc;
    const Zone& zone;
};

using Predicate = std::function<bool(const StateView&)>;

struct TransitionDesc {
    enum class Kind { Initial, Internal, Sync };
    Kind kind = Kind::Internal;
    int inst_a = -1, edge_a = -1;  // internal edge / sender
    int inst_b = -1, edge_b = -1;  // receiver for Sync
};

enum class VerdictKind { Reachable, Unreachable, BudgetExhausted, ModelingError, AssertFailed };

std::string verdict_name(VerdictKind v);

struct ExploreOptions {
    std::size_t state_budget = 5'000'000;
    /// Slot whose maximum over all reachable states is reported (queue tail).
    int watch_slot = -1;
    /// Invoked on every stored state; a returned message fails exploration.
    std::function<std::optional<std::string>(const StateView&)> state_assert;
};

struct ExploreResult {
    VerdictKind verdict = VerdictKind::Unreachable;
    std::vector<TransitionDesc> trace;  // Reachable / ModelingError / AssertFailed
    std::size_t states = 0;             // stored symbolic states
    std::size_t transitions = 0;
    long watch_max = -1;
    std::string message;
};

ExploreResult explore(const CompiledSystem& sys, const Predicate& goal,
                      const ExploreOptions& opts = {});

/// Re-executes a transition sequence from the initial state without
/// extrapolation, tracking global time with an auxiliary clock. Returns the
/// per-step snapshots, or nullopt if the sequence cannot be replayed.
struct ReplayStep {
    TransitionDesc desc;
    std::vector<std::uint16_t> locs;
    std::vector<std::int32_t> disc;
    Zone zone;                       // includes the trailing global-time clock
    long time_lo = 0, time_hi = -1;  // hi = -1 means unbounded
};

std::optional<std::vector<ReplayStep>> replay(const CompiledSystem& sys,
                                              const std::vector<TransitionDesc>& trace);

/// Renders one transition in human-readable form.
std::string describe_transition(const CompiledSystem& sys, const TransitionDesc& t);

}  // namespace creol2ta::analysis
