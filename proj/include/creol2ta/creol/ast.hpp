#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "creol2ta/diag.hpp"
#include "creol2ta/ta/expr.hpp"

namespace creol2ta::creol {

// AST for the Creol subset: interfaces with operation signatures, classes
// with int/bool variables and annotated method bodies. Expressions reuse the
// backend expression trees (the frontend accepts exactly the subset the
// exporter can emit).

using ta::ExprPtr;

/// Best/worst execution time and optional call deadline, in time units.
/// Statements without annotations execute in zero time.
struct TimingAnnotation {
    long best = 0;
    long worst = 0;
    std::optional<long> deadline;
};

struct Guard;
using GuardPtr = std::shared_ptr<const Guard>;

struct Guard {
    enum class Kind { BoolExpr, ReplyTest, Not, And };
    Kind kind = Kind::BoolExpr;
    ExprPtr expr;        // BoolExpr
    std::string label;   // ReplyTest
    GuardPtr a, b;       // Not: a; And: a, b
    SourceLoc loc;

    static GuardPtr bool_expr(ExprPtr e, SourceLoc l = {});
    static GuardPtr reply_test(std::string label, SourceLoc l = {});
    static GuardPtr negate(GuardPtr g, SourceLoc l = {});
    static GuardPtr conj(GuardPtr a, GuardPtr b, SourceLoc l = {});
};

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;
using StmtSeq = std::vector<StmtPtr>;

struct Stmt {
    enum class Kind { Assign, AsyncCall, BlockingReply, Release, Await, While, If, Skip };
    Kind kind = Kind::Skip;

    std::string var;            // Assign target
    ExprPtr expr;               // Assign rhs, While/If condition
    std::string label;          // AsyncCall (may be empty), BlockingReply
    std::string target;         // AsyncCall receiver; empty = self
    std::string method;         // AsyncCall callee
    GuardPtr guard;             // Await
    StmtSeq body;               // While body, If then-branch
    StmtSeq else_body;          // If else-branch

    TimingAnnotation ann;
    SourceLoc loc;
};

struct InterfaceDecl {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;  // name : type-name
    std::vector<std::string> inherits;
    struct Op {
        std::optional<std::string> cointerface;
        std::string name;
    };
    std::vector<Op> ops;
    SourceLoc loc;
};

struct MethodDecl {
    std::optional<std::string> cointerface;
    std::string name;
    StmtSeq body;
    SourceLoc loc;
};

struct ClassDecl {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;  // the known objects
    std::vector<std::string> implements;
    std::vector<std::pair<std::string, bool>> vars;  // name, is_bool
    std::vector<MethodDecl> methods;
    SourceLoc loc;

    const MethodDecl* find_method(const std::string& n) const;
    bool has_var(const std::string& n) const;
    bool has_param(const std::string& n) const;
};

struct SourceModel {
    std::string file;
    std::vector<InterfaceDecl> interfaces;
    std::vector<ClassDecl> classes;

    const InterfaceDecl* find_interface(const std::string& n) const;
};

/// Labels declared by async calls anywhere in the statement sequence.
void collect_labels(const StmtSeq& body, std::vector<std::string>& out);
/// Labels tested by the guard.
void collect_labels(const GuardPtr& g, std::vector<std::string>& out);
/// Method names invoked (labeled or unlabeled) anywhere in the sequence.
void collect_methods(const StmtSeq& body, std::vector<std::string>& out);

}  // namespace creol2ta::creol
