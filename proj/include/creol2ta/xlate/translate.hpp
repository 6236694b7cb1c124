#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "creol2ta/creol/ast.hpp"
#include "creol2ta/diag.hpp"
#include "creol2ta/ta/model.hpp"

namespace creol2ta::xlate {

/// Finite-domain abstraction chosen by the user: kept variables survive with
/// their declared ranges, dropped variables disappear and any atomic
/// condition mentioning them becomes true.
struct AbstractionPolicy {
    struct Kept {
        std::string name;
        long lo = 0, hi = 1;  // ints need an explicit range; bools use 0..1
    };
    std::vector<Kept> keep;
    std::vector<std::string> drop;

    const Kept* find_kept(const std::string& n) const;
    bool is_dropped(const std::string& n) const;

    /// Policy that keeps every class variable (bools 0..1, ints 0..hi_default).
    static AbstractionPolicy keep_all(const creol::ClassDecl& cls, long int_hi = 3);
};

struct TaskInfo {
    std::string name;
    int id = -1;                    // dense, from 0
    bool is_method = false;
    std::string method;             // owning method
    creol::GuardPtr enabler_src;    // null = true
    ta::ExprPtr enabler;            // abstracted form; null = true
};

struct TaskTable {
    std::vector<TaskInfo> tasks;
    std::vector<std::pair<std::string, int>> labels;          // ids from 1
    std::vector<std::pair<std::string, int>> remote_methods;  // ids from 0

    const TaskInfo* find(const std::string& name) const;
    int task_id(const std::string& name) const;    // -1 if absent
    int label_id(const std::string& name) const;   // -1 if absent
    int remote_id(const std::string& name) const;  // -1 if absent

    static std::string task_const(const std::string& task_name) { return "op_" + task_name; }
};

struct LocEntry {
    std::string template_name;
    int loc_id = -1;
    std::string loc_name;
    int line = 0;
    std::string stmt;  // pretty-printed statement the location awaits
};

/// Trace-back map from automaton locations to source lines. Not defined for
/// the initial and final locations of each method automaton.
struct LocMap {
    std::vector<LocEntry> entries;

    const LocEntry* find(const std::string& tmpl, int loc_id) const;
    std::vector<const LocEntry*> at_line(int line) const;
    std::vector<const LocEntry*> at_line(const std::string& tmpl, int line) const;
};

struct DeadlineRange {
    long min = 0;
    long max = 1;
    long init = 1;
};

struct TranslationResult {
    std::string class_name;
    int n_obj = 1;
    ta::Declarations globals;
    std::vector<ta::Template> templates;  // exactly one per method
    TaskTable table;
    LocMap locmap;
    DeadlineRange deadlines;
    bool ok = false;
};

/// Translates a validated class: one automaton template per method, subtask
/// entries folded into the owning method's automaton, generated global
/// declarations, the task table with enabling conditions and the source map.
TranslationResult translate_class(const creol::ClassDecl& cls, const AbstractionPolicy& policy,
                                  DeadlineRange deadlines, DiagnosticList& diags,
                                  const std::string& file = {});

// -- abstraction helpers (exposed for tests) ---------------------------------

/// Abs on expressions in value position: kept var v -> v[self], class params
/// pass through. Sets *mentions_dropped when a dropped variable occurs.
ta::ExprPtr abs_expr(const ta::ExprPtr& e, const AbstractionPolicy& policy,
                     const creol::ClassDecl& cls, bool* mentions_dropped = nullptr);

/// Abs on guards. Negation distributes to atoms first (negation normal
/// form); atoms mentioning dropped variables become true regardless of
/// polarity, so the result over-approximates the concrete guard.
ta::ExprPtr abs_guard(const creol::GuardPtr& g, bool negated, const AbstractionPolicy& policy,
                      const creol::ClassDecl& cls, const TaskTable& table);

/// labels[t][self] = false for every reply test occurring in g, deduplicated,
/// in label-id order.
std::vector<ta::UpdateItem> label_reset(const creol::GuardPtr& g, const TaskTable& table);

/// Fig. 5 structural collections over a class: declared labels, called
/// methods, tasks (methods plus subtask names) and the enabler set.
struct HelperSets {
    std::vector<std::string> labels;
    std::vector<std::string> methods;        // every called method name
    std::vector<std::string> tasks;          // declared methods + subtasks
    std::vector<std::string> remote_methods; // methods minus tasks
};
HelperSets collect_helpers(const creol::ClassDecl& cls);

}  // namespace creol2ta::xlate
