#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "creol2ta/diag.hpp"
#include "creol2ta/ta/model.hpp"

namespace creol2ta::analysis {

// Pre-compiled form of a system: template arguments folded, names resolved
// to dense discrete-state slots and clock indices, functions lowered to an
// interpretable statement tree. Exploration evaluates compiled expressions
// against a flat int32 state vector.

struct CompiledExpr {
    enum class Kind { Const, Slot, Un, Bin, Call };
    Kind kind = Kind::Const;
    long value = 0;              // Const
    ta::UnOp un = ta::UnOp::Not;
    ta::BinOp bin = ta::BinOp::Add;
    int slot_base = -1;          // Slot: first element
    std::vector<int> dims;       // Slot: array dimensions (empty = scalar)
    int frame_off = -1;          // Slot with frame_off >= 0 reads a function frame
    int fn = -1;                 // Call
    std::vector<CompiledExpr> kids;  // Un: 1, Bin: 2, Slot: indices, Call: args
};

struct CLValue {
    bool frame = false;
    int frame_off = -1;
    int slot_base = -1;
    std::vector<int> dims;
    std::vector<CompiledExpr> indices;
};

struct CStmt {
    enum class Kind { Assign, If, For, Return, Local, Call };
    Kind kind = Kind::Assign;
    CLValue lhs;
    CompiledExpr rhs;            // Assign value / Call expression payload
    CompiledExpr cond;           // If / Return value
    bool has_ret_value = false;
    std::vector<CStmt> then_body, else_body;
    int frame_off = -1;          // For variable / Local target
    CompiledExpr lo, hi, init;
    bool has_init = false;
};

struct CFunc {
    std::string name;
    int n_params = 0;
    int frame_size = 0;
    std::vector<CStmt> body;
};

struct CClockRef {
    int base = -1;               // clock index (1-based; 0 is the reference)
    int size = 0;                // 0 = scalar
    bool has_index = false;
    CompiledExpr index;
};

struct CAtom {
    bool has_when = false;
    CompiledExpr when;
    CClockRef left;
    bool has_minus = false;
    CClockRef minus;
    ta::Rel rel = ta::Rel::Le;
    CompiledExpr bound;
};

struct CUpdate {
    enum class Kind { Assign, Call, ResetClock };
    Kind kind = Kind::Assign;
    CLValue lhs;
    CompiledExpr rhs;
    int fn = -1;
    std::vector<CompiledExpr> args;
    CClockRef clock;
};

struct CEdge {
    int src = -1, dst = -1;
    bool has_guard = false;
    CompiledExpr guard;
    std::vector<CAtom> atoms;
    int chan = -1;               // -1 = internal
    bool send = false;
    std::vector<CompiledExpr> chan_idx;
    std::vector<CUpdate> updates;
    int tmpl_edge = -1;          // index into the source template's edge list
};

struct CLoc {
    std::string name;
    ta::Urgency urgency = ta::Urgency::Normal;
    std::vector<CAtom> invariant;
    int tmpl_loc_id = -1;
};

struct CInstance {
    std::string name;
    std::string template_name;
    int initial = -1;
    std::vector<CLoc> locs;
    std::vector<CEdge> edges;
    std::vector<int> internal_edges;  // indices into edges
};

struct CompiledSystem {
    const ta::SystemModel* model = nullptr;

    int n_clocks = 0;                       // excluding the reference clock
    std::vector<std::string> clock_names;   // [0] unused
    std::vector<std::int32_t> max_const;    // extrapolation ceilings, size n_clocks+1

    std::vector<std::int32_t> init_disc;
    std::vector<std::pair<std::int32_t, std::int32_t>> slot_range;
    std::vector<bool> slot_meta;
    std::vector<std::string> slot_names;

    struct Chan {
        std::string name;
        std::vector<int> dims;
        bool urgent = false;
    };
    std::vector<Chan> channels;

    std::vector<CFunc> funcs;
    std::vector<CInstance> instances;

    // (instance, edge) lists per channel, split by direction; stable order.
    std::vector<std::vector<std::pair<int, int>>> senders, receivers;

    /// Slot of a scalar or fully indexed array variable; instance-local names
    /// take `instance` >= 0, global names ignore it.
    std::optional<int> find_slot(int instance, const std::string& var,
                                 const std::vector<int>& indices = {}) const;
    std::optional<int> find_instance(const std::string& name) const;
    std::optional<int> find_location(int instance, const std::string& loc_name) const;
};

class CompileError : public std::runtime_error {
public:
    explicit CompileError(const std::string& what) : std::runtime_error(what) {}
};

/// Flattens and compiles the system. Throws CompileError on unresolved names
/// (run ta::well_formed first for diagnostics instead of exceptions).
CompiledSystem compile_system(const ta::SystemModel& sys);

// -- runtime evaluation -------------------------------------------------------

struct ModelingViolation {
    std::string message;
};

/// Evaluates compiled expressions/functions against a discrete state vector.
/// Throws ModelingViolation on out-of-range assignments.
class Evaluator {
public:
    Evaluator(const CompiledSystem& sys, std::vector<std::int32_t>& disc)
        : sys_(sys), disc_(disc) {}

    long eval(const CompiledExpr& e);
    void run_update(const CUpdate& u, const std::function<void(int)>& on_reset);
    long call(int fn, const std::vector<long>& args);

    /// Resolves a clock reference to a concrete clock index (1-based).
    int resolve_clock(const CClockRef& c);

private:
    void exec(const CStmt& s, std::vector<long>& frame, std::optional<long>& ret);
    void exec_body(const std::vector<CStmt>& body, std::vector<long>& frame,
                   std::optional<long>& ret);
    void store(const CLValue& lv, long v, std::vector<long>* frame);

    const CompiledSystem& sys_;
    std::vector<std::int32_t>& disc_;
    std::vector<long>* cur_frame_ = nullptr;
};

}  // namespace creol2ta::analysis
