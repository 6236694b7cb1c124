#pragma once

#include "creol2ta/analysis/explore.hpp"

namespace creol2ta::analysis {

// Explicit-state reference checker, independent of the zone machinery: clocks
// take integer values, time advances in unit steps. On systems with closed
// (non-strict) guards and invariants this decides the same reachability
// questions as the zone engine; that agreement is asserted by tests.

struct OracleOptions {
    /// Clock values saturate here; must exceed every constant compared
    /// against a clock. Saturation is only sound without clock-difference
    /// guards; systems with difference guards run time-bounded instead.
    long horizon = 0;
    std::size_t state_budget = 30'000'000;
    /// Accept strict atoms (pointwise evaluation; sound but potentially
    /// incomplete on systems that need fractional delays).
    bool allow_strict = false;
};

enum class OracleVerdict { Reachable, Unreachable, BudgetExhausted, Refused };

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::Unreachable;
    std::size_t states = 0;
    std::string message;
};

struct OracleStateView {
    const std::vector<std::uint16_t>& locs;
    const std::vector<std::int32_t>& disc;
    const std::vector<std::int32_t>& clocks;  // index 0 unused
};

using OraclePredicate = std::function<bool(const OracleStateView&)>;

OracleResult discrete_oracle(const CompiledSystem& sys, const OraclePredicate& goal,
                             const OracleOptions& opts);

}  // namespace creol2ta::analysis
