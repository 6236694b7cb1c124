#include "creol2ta/creol/printer.hpp"

#include <sstream>

namespace creol2ta::creol {

namespace {

std::string ann_comment(const TimingAnnotation& a) {
    if (a.best == 0 && a.worst == 0 && !a.deadline) return {};
    std::ostringstream os;
    os << "/*";
    os << "@b" << a.best << " @w" << a.worst;
    if (a.deadline) os << " @d" << *a.deadline;
    os << "*/";
    return os.str();
}

void print_seq(const StmtSeq& seq, std::ostringstream& os, int indent);

void print_stmt(const Stmt& s, std::ostringstream& os, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    os << pad;
    switch (s.kind) {
        case Stmt::Kind::Skip: os << "skip"; break;
        case Stmt::Kind::Release: os << "release"; break;
        case Stmt::Kind::Assign:
            os << s.var << " := " << ta::to_string(s.expr);
            break;
        case Stmt::Kind::AsyncCall:
            if (!s.label.empty()) os << s.label;
            os << "!";
            if (!s.target.empty()) os << s.target << ".";
            os << s.method << "()";
            break;
        case Stmt::Kind::BlockingReply: os << s.label << "?"; break;
        case Stmt::Kind::Await: os << "await " << print_guard(s.guard); break;
        case Stmt::Kind::While:
            os << "while " << ta::to_string(s.expr) << " do\n";
            print_seq(s.body, os, indent + 1);
            os << "\n" << pad << "od";
            break;
        case Stmt::Kind::If:
            os << "if " << ta::to_string(s.expr) << " then\n";
            print_seq(s.body, os, indent + 1);
            os << "\n" << pad << "else\n";
            print_seq(s.else_body, os, indent + 1);
            os << "\n" << pad << "fi";
            break;
    }
}

void print_seq(const StmtSeq& seq, std::ostringstream& os, int indent) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        print_stmt(*seq[i], os, indent);
        if (i + 1 < seq.size()) os << ";";
        std::string ann = ann_comment(seq[i]->ann);
        if (!ann.empty()) os << " " << ann;
        if (i + 1 < seq.size()) os << "\n";
    }
}

}  // namespace

std::string print_guard(const GuardPtr& g) {
    if (!g) return "true";
    switch (g->kind) {
        case Guard::Kind::BoolExpr: return ta::to_string(g->expr);
        case Guard::Kind::ReplyTest: return g->label + "?";
        case Guard::Kind::Not: return "~(" + print_guard(g->a) + ")";
        case Guard::Kind::And:
            return "(" + print_guard(g->a) + " /\\ " + print_guard(g->b) + ")";
    }
    return "true";
}

std::string print_stmt_inline(const Stmt& s) {
    std::ostringstream os;
    print_stmt(s, os, 0);
    return os.str();
}

std::string print_model(const SourceModel& m) {
    std::ostringstream os;
    for (const auto& in : m.interfaces) {
        os << "interface " << in.name;
        if (!in.params.empty()) {
            os << "(";
            for (std::size_t i = 0; i < in.params.size(); ++i) {
                if (i) os << ", ";
                os << in.params[i].first << " : " << in.params[i].second;
            }
            os << ")";
        }
        if (!in.inherits.empty()) {
            os << " inherits ";
            for (std::size_t i = 0; i < in.inherits.size(); ++i) {
                if (i) os << ", ";
                os << in.inherits[i];
            }
        }
        os << " begin";
        for (const auto& op : in.ops) {
            os << " ";
            if (op.cointerface) os << "with " << *op.cointerface << " ";
            os << "op " << op.name;
        }
        os << " end\n";
    }
    for (const auto& cl : m.classes) {
        os << "class " << cl.name;
        if (!cl.params.empty()) {
            os << "(";
            for (std::size_t i = 0; i < cl.params.size(); ++i) {
                if (i) os << ", ";
                os << cl.params[i].first << " : " << cl.params[i].second;
            }
            os << ")";
        }
        os << " implements ";
        for (std::size_t i = 0; i < cl.implements.size(); ++i) {
            if (i) os << ", ";
            os << cl.implements[i];
        }
        os << " begin\n";
        for (const auto& [v, is_bool] : cl.vars)
            os << "  var " << v << " : " << (is_bool ? "bool" : "int") << "\n";
        for (const auto& mth : cl.methods) {
            os << "  ";
            if (mth.cointerface) os << "with " << *mth.cointerface << " ";
            os << "op " << mth.name << " ==\n";
            print_seq(mth.body, os, 2);
            os << "\n";
        }
        os << "end\n";
    }
    return os.str();
}

}  // namespace creol2ta::creol
