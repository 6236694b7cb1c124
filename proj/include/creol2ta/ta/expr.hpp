#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace creol2ta::ta {

// Discrete expression trees shared by guards, updates, array indices and
// channel index expressions. Clocks never appear here; clock constraints
// are separate ClockAtoms in the model.

enum class BinOp { Add, Sub, And, Or, Lt, Le, Gt, Ge, Eq, Ne };
enum class UnOp { Neg, Not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { IntLit, BoolLit, Name, Index, Unary, Binary, Call };

    Kind kind = Kind::IntLit;
    long value = 0;              // IntLit payload; BoolLit stores 0/1
    std::string name;            // Name, Index base, Call callee
    UnOp un = UnOp::Not;
    BinOp bin = BinOp::Add;
    std::vector<ExprPtr> args;   // Unary: [e]; Binary: [l,r]; Index: indices; Call: arguments

    static ExprPtr int_lit(long v);
    static ExprPtr bool_lit(bool b);
    static ExprPtr var(std::string n);
    static ExprPtr index(std::string base, std::vector<ExprPtr> idx);
    static ExprPtr unary(UnOp op, ExprPtr e);
    static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r);
    static ExprPtr call(std::string fn, std::vector<ExprPtr> a);

    static ExprPtr and_of(ExprPtr l, ExprPtr r);  // null-tolerant conjunction
};

bool is_true_literal(const ExprPtr& e);

/// Renders the expression in the text syntax used by the external checker
/// (&&, ||, !, comparisons). Parenthesizes by precedence.
std::string to_string(const Expr& e);
std::string to_string(const ExprPtr& e);  // null prints as "true"

// -- Assignment targets -------------------------------------------------

struct LValue {
    std::string name;
    std::vector<ExprPtr> indices;
};

std::string to_string(const LValue& lv);

// -- Named guard/update functions ----------------------------------------
//
// A small imperative subset (assignment, if, bounded for, locals, return)
// interpreted by the analysis engine and printed verbatim into exported
// declarations. One source of truth for both consumers.

struct FuncStmt;

struct FuncBody {
    std::vector<FuncStmt> stmts;
};

struct FuncStmt {
    enum class Kind { Assign, If, For, Return, Local, CallStmt };
    Kind kind = Kind::Assign;

    LValue lhs;                 // Assign
    ExprPtr rhs;                // Assign; CallStmt stores the call expression here
    ExprPtr cond;               // If condition, Return value (may be null for void)
    FuncBody then_body;         // If then / For body
    FuncBody else_body;         // If else
    std::string var;            // For iteration variable / Local name
    ExprPtr lo, hi;             // For bounds, inclusive
    ExprPtr init;               // Local initializer (may be null -> 0)

    static FuncStmt assign(LValue lv, ExprPtr e);
    static FuncStmt if_stmt(ExprPtr c, FuncBody then_b, FuncBody else_b = {});
    static FuncStmt for_stmt(std::string v, ExprPtr lo, ExprPtr hi, FuncBody body);
    static FuncStmt ret(ExprPtr value);
    static FuncStmt local(std::string n, ExprPtr init);
    static FuncStmt call_stmt(std::string fn, std::vector<ExprPtr> args);
};

struct FuncDef {
    enum class Ret { Void, Int, Bool };
    std::string name;
    Ret ret = Ret::Void;
    std::vector<std::string> params;  // ints
    FuncBody body;
};

/// Prints the function in the external checker's C-like declaration syntax.
std::string to_string(const FuncDef& f);

// -- Tree-walk evaluation -------------------------------------------------
//
// Used for constant folding, determinism checks and small-scale validation.
// The exploration engine compiles expressions to slot references instead.

struct EvalEnv {
    // Returns a value for a plain name (constant, template argument, local).
    std::function<std::optional<long>(const std::string&)> name_lookup;
    // Reads an array element. Absent -> lookup failure.
    std::function<std::optional<long>(const std::string&, std::span<const long>)> index_lookup;
    // Calls a named function.
    std::function<std::optional<long>(const std::string&, std::span<const long>)> call;
};

struct EvalError {
    std::string message;
};

/// Evaluates the expression; returns nullopt (with *err filled when given)
/// if a name cannot be resolved.
std::optional<long> eval(const Expr& e, const EvalEnv& env, EvalError* err = nullptr);

/// Folds an expression to a constant if it only references constants
/// resolvable through `consts`.
std::optional<long> fold_constant(
    const ExprPtr& e, const std::function<std::optional<long>(const std::string&)>& consts);

/// Collects every plain/array name referenced by the expression.
void collect_names(const ExprPtr& e, std::vector<std::string>& out);

}  // namespace creol2ta::ta
