#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "creol2ta/diag.hpp"
#include "creol2ta/ta/expr.hpp"

namespace creol2ta::ta {

// Timed-automaton intermediate representation. A system is a set of
// templates plus global declarations plus instantiations; templates hold
// locations with urgency flags and invariants, and edges with guards,
// channel synchronizations, resets and discrete updates.

enum class Rel { Lt, Le, Eq, Ge, Gt };

std::string rel_text(Rel r);

/// Reference to a clock: a scalar (index null) or one element of a clock
/// array selected by a discrete index expression.
struct ClockRef {
    std::string clock;
    ExprPtr index;  // null for scalar clocks

    static ClockRef scalar(std::string name) { return {std::move(name), nullptr}; }
    static ClockRef elem(std::string name, ExprPtr idx) { return {std::move(name), std::move(idx)}; }
};

std::string to_string(const ClockRef& c);

/// One conjunct of a clock constraint: `left [- minus] rel bound`, where the
/// bound is a discrete expression evaluated in the owning instance's scope.
/// A non-null `when` makes the atom conditional: it participates in the
/// constraint only in states where `when` evaluates to true.
struct ClockAtom {
    ClockRef left;
    std::optional<ClockRef> minus;
    Rel rel = Rel::Le;
    ExprPtr bound;
    ExprPtr when;  // null = unconditional

    static ClockAtom simple(ClockRef c, Rel r, ExprPtr b) {
        return {std::move(c), std::nullopt, r, std::move(b), nullptr};
    }
    static ClockAtom diff(ClockRef l, ClockRef m, Rel r, ExprPtr b) {
        return {std::move(l), std::move(m), r, std::move(b), nullptr};
    }
};

std::string to_string(const ClockAtom& a);

struct Guard {
    ExprPtr discrete;               // null = true
    std::vector<ClockAtom> atoms;   // conjunction

    bool trivially_true() const { return !discrete && atoms.empty(); }
};

std::string to_string(const Guard& g);

struct Sync {
    std::string channel;
    std::vector<ExprPtr> indices;
    bool send = true;  // send = '!', receive = '?'
};

std::string to_string(const Sync& s);

/// Ordered edge effect. Items run left to right; clock resets evaluate their
/// index against the discrete state as updated so far.
struct UpdateItem {
    enum class Kind { Assign, Call, ResetClock };
    Kind kind = Kind::Assign;

    LValue lhs;                   // Assign
    ExprPtr rhs;                  // Assign
    std::string fn;               // Call
    std::vector<ExprPtr> args;    // Call
    ClockRef clock;               // ResetClock

    static UpdateItem assign(LValue lv, ExprPtr e);
    static UpdateItem call(std::string fn, std::vector<ExprPtr> args = {});
    static UpdateItem reset(ClockRef c);
};

std::string to_string(const UpdateItem& u);

enum class Urgency { Normal, Urgent, Committed };

struct Location {
    int id = -1;
    std::string name;
    Urgency urgency = Urgency::Normal;
    std::vector<ClockAtom> invariant;  // upper bounds only
};

struct Edge {
    int src = -1;
    int dst = -1;
    Guard guard;
    std::optional<Sync> sync;
    std::vector<UpdateItem> updates;
    std::string note;  // free-form tag carried into dumps and XML comments
};

struct VarDecl {
    std::string name;
    bool is_bool = false;
    long lo = 0, hi = 1;
    std::vector<int> dims;      // empty = scalar
    std::vector<long> init;     // empty = zero-filled; else flattened row-major
    bool meta = false;          // excluded from state comparison
    bool is_const = false;      // never assigned after initialization

    long flat_size() const {
        long n = 1;
        for (int d : dims) n *= d;
        return n;
    }
};

struct ClockDecl {
    std::string name;
    int size = 0;  // 0 = scalar, otherwise array length
};

struct ChanDecl {
    std::string name;
    std::vector<int> dims;
    bool urgent = false;
};

struct Declarations {
    std::vector<std::pair<std::string, long>> constants;
    std::vector<ClockDecl> clocks;
    std::vector<VarDecl> vars;
    std::vector<ChanDecl> channels;
    std::vector<FuncDef> functions;

    const long* find_constant(const std::string& n) const;
    const VarDecl* find_var(const std::string& n) const;
    const ClockDecl* find_clock(const std::string& n) const;
    const ChanDecl* find_channel(const std::string& n) const;
    const FuncDef* find_function(const std::string& n) const;

    void add_constant(std::string n, long v) { constants.emplace_back(std::move(n), v); }
};

/// Renders declarations in the external checker's syntax.
std::string to_string(const Declarations& d);

struct Template {
    std::string name;
    std::vector<std::string> args;  // const int parameters, in order
    Declarations locals;
    std::vector<Location> locations;
    int initial = -1;
    std::vector<Edge> edges;

    const Location* find_location(int id) const;
    const Location* find_location_by_name(const std::string& n) const;
};

struct Instance {
    std::string name;
    std::string template_name;
    std::vector<long> args;
};

struct SystemModel {
    Declarations globals;
    std::vector<Template> templates;
    std::vector<Instance> instances;

    const Template* find_template(const std::string& n) const;
};

// -- construction -----------------------------------------------------------

class BuildError : public std::runtime_error {
public:
    explicit BuildError(const std::string& what) : std::runtime_error(what) {}
};

/// Incremental template construction. Throws BuildError on duplicate ids,
/// dangling endpoints and a missing initial location at finalize time.
class TemplateBuilder {
public:
    explicit TemplateBuilder(std::string name) { tmpl_.name = std::move(name); }

    TemplateBuilder& arg(std::string name);

    int add_location(std::string name, Urgency u = Urgency::Normal);
    void set_initial(int id);
    void set_invariant(int id, std::vector<ClockAtom> inv);
    void add_invariant_atom(int id, ClockAtom a);
    Edge& add_edge(int src, int dst);

    Template& tmpl() { return tmpl_; }

    /// Structural checks local to the template; returns the finished template.
    Template finalize();

private:
    Template tmpl_;
    int next_id_ = 0;
};

// -- validation ---------------------------------------------------------------

/// Whole-system structural validation: declared names, array dimensions,
/// channel arities, instance arities, invariant shape, urgent-channel edge
/// restrictions. Empty result means well-formed. Idempotent, side-effect
/// free.
DiagnosticList well_formed(const SystemModel& sys);

/// Determinism witness: two edge indices from the same location with the
/// same action and overlapping guards.
struct DeterminismResult {
    bool deterministic = true;
    int edge_a = -1, edge_b = -1;
    std::string reason;
};

/// Checks the template against the determinism requirement: for every pair
/// of same-action edges out of one location, the guard conjunction must be
/// unsatisfiable. Clock satisfiability is decided on a DBM; discrete parts
/// are enumerated over the bounded domains of the variables they mention.
DeterminismResult check_deterministic(const Template& tmpl, const SystemModel& sys);

}  // namespace creol2ta::ta
