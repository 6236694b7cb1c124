#include "creol2ta/creol/parser.hpp"

#include <cctype>

#include "creol2ta/creol/lexer.hpp"

namespace creol2ta::creol {

using ta::BinOp;
using ta::Expr;
using ta::UnOp;

GuardPtr Guard::bool_expr(ExprPtr e, SourceLoc l) {
    auto g = std::make_shared<Guard>();
    g->kind = Kind::BoolExpr;
    g->expr = std::move(e);
    g->loc = l;
    return g;
}
GuardPtr Guard::reply_test(std::string label, SourceLoc l) {
    auto g = std::make_shared<Guard>();
    g->kind = Kind::ReplyTest;
    g->label = std::move(label);
    g->loc = l;
    return g;
}
GuardPtr Guard::negate(GuardPtr inner, SourceLoc l) {
    auto g = std::make_shared<Guard>();
    g->kind = Kind::Not;
    g->a = std::move(inner);
    g->loc = l;
    return g;
}
GuardPtr Guard::conj(GuardPtr a, GuardPtr b, SourceLoc l) {
    auto g = std::make_shared<Guard>();
    g->kind = Kind::And;
    g->a = std::move(a);
    g->b = std::move(b);
    g->loc = l;
    return g;
}

const MethodDecl* ClassDecl::find_method(const std::string& n) const {
    for (const auto& m : methods)
        if (m.name == n) return &m;
    return nullptr;
}
bool ClassDecl::has_var(const std::string& n) const {
    for (const auto& [v, b] : vars) {
        (void)b;
        if (v == n) return true;
    }
    return false;
}
bool ClassDecl::has_param(const std::string& n) const {
    for (const auto& [p, t] : params) {
        (void)t;
        if (p == n) return true;
    }
    return false;
}

const InterfaceDecl* SourceModel::find_interface(const std::string& n) const {
    for (const auto& i : interfaces)
        if (i.name == n) return &i;
    return nullptr;
}

// -- annotation extraction ----------------------------------------------------

TimingAnnotation extract_annotation(std::string_view text, DiagnosticList& diags, SourceLoc loc,
                                    const std::string& file) {
    TimingAnnotation ann;
    bool seen_b = false, seen_w = false, seen_d = false;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] != '@') continue;
        char kind = text[i + 1];
        if (kind != 'b' && kind != 'w' && kind != 'd') continue;
        std::size_t j = i + 2;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        std::size_t k = j;
        while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
        if (k == j) {
            diags.error(loc, std::string("malformed timing directive '@") + kind +
                                 "': integer expected", file);
            i = j;
            continue;
        }
        long v = std::stol(std::string(text.substr(j, k - j)));
        bool* seen = kind == 'b' ? &seen_b : kind == 'w' ? &seen_w : &seen_d;
        if (*seen) {
            diags.error(loc, std::string("duplicate timing directive '@") + kind + "'", file);
        } else {
            *seen = true;
            if (kind == 'b')
                ann.best = v;
            else if (kind == 'w')
                ann.worst = v;
            else
                ann.deadline = v;
        }
        i = k - 1;
    }
    return ann;
}

// -- recursive-descent parser ---------------------------------------------------

namespace {

class Parser {
public:
    Parser(std::string_view text, DiagnosticList& diags, std::string file)
        : diags_(diags), file_(std::move(file)), lexer_(text, diags, file_) {}

    SourceModel parse() {
        SourceModel model;
        model.file = file_;
        while (cur().kind == Tok::BlockComment && pos_ + 1 < toks().size()) ++pos_;
        while (!at(Tok::End)) {
            if (at_kw("interface")) {
                model.interfaces.push_back(parse_interface());
            } else if (at_kw("class")) {
                model.classes.push_back(parse_class());
            } else {
                error_here("expected 'interface' or 'class'");
                advance();
            }
        }
        return model;
    }

private:
    const std::vector<Token>& toks() const { return lexer_.tokens(); }
    const Token& cur() const { return toks()[pos_]; }
    const Token& peek(std::size_t n = 1) const {
        std::size_t p = pos_;
        std::size_t seen = 0;
        while (p + 1 < toks().size()) {
            ++p;
            if (toks()[p].kind == Tok::BlockComment) continue;
            if (++seen == n) break;
        }
        return toks()[p];
    }

    // Advancing past a token collects any block comments that follow it;
    // they stay pending until a statement claims them as its annotation or
    // the next statement discards them as prose.
    void advance() {
        if (pos_ + 1 < toks().size()) ++pos_;
        while (cur().kind == Tok::BlockComment) {
            pending_.push_back(cur());
            if (pos_ + 1 >= toks().size()) break;
            ++pos_;
        }
    }

    bool at(Tok k) const { return cur().kind == k; }
    bool at_kw(std::string_view kw) const { return at(Tok::Ident) && cur().text == kw; }

    bool accept(Tok k) {
        if (!at(k)) return false;
        advance();
        return true;
    }
    bool accept_kw(std::string_view kw) {
        if (!at_kw(kw)) return false;
        advance();
        return true;
    }
    void expect(Tok k, const std::string& what) {
        if (!accept(k)) {
            error_here("expected " + what);
            throw SyntaxAbort{};
        }
    }
    void expect_kw(std::string_view kw) {
        if (!accept_kw(kw)) {
            error_here("expected '" + std::string(kw) + "'");
            throw SyntaxAbort{};
        }
    }
    std::string expect_ident(const std::string& what) {
        if (!at(Tok::Ident) || is_keyword(cur().text)) {
            error_here("expected " + what);
            throw SyntaxAbort{};
        }
        std::string s = cur().text;
        advance();
        return s;
    }

    static bool is_keyword(const std::string& s) {
        static const char* kws[] = {"interface", "class", "implements", "inherits", "begin",
                                    "end",       "var",   "op",         "with",     "while",
                                    "do",        "od",    "if",         "then",     "else",
                                    "fi",        "skip",  "release",    "await",    "int",
                                    "bool",      "true",  "false"};
        for (const char* k : kws)
            if (s == k) return true;
        return false;
    }

    struct SyntaxAbort {};

    void error_here(const std::string& msg) { diags_.error(cur().loc, msg, file_); }

    // ---- declarations ----

    std::vector<std::pair<std::string, std::string>> parse_param_list() {
        std::vector<std::pair<std::string, std::string>> params;
        expect(Tok::LParen, "'('");
        if (!at(Tok::RParen)) {
            do {
                std::string n = expect_ident("parameter name");
                expect(Tok::Colon, "':'");
                std::string t = expect_ident("type name");
                params.emplace_back(n, t);
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
        return params;
    }

    // Interface name with optional argument list, which we record by name only.
    std::string parse_iface_ref() {
        std::string n = expect_ident("interface name");
        if (accept(Tok::LParen)) {
            int depth = 1;
            while (depth > 0 && !at(Tok::End)) {
                if (at(Tok::LParen)) ++depth;
                if (at(Tok::RParen)) --depth;
                advance();
            }
        }
        return n;
    }

    InterfaceDecl parse_interface() {
        InterfaceDecl decl;
        decl.loc = cur().loc;
        expect_kw("interface");
        decl.name = expect_ident("interface name");
        if (at(Tok::LParen)) decl.params = parse_param_list();
        if (accept_kw("inherits")) {
            do {
                decl.inherits.push_back(parse_iface_ref());
            } while (accept(Tok::Comma));
        }
        expect_kw("begin");
        while (!at_kw("end") && !at(Tok::End)) {
            InterfaceDecl::Op op;
            if (accept_kw("with")) op.cointerface = expect_ident("cointerface name");
            expect_kw("op");
            op.name = expect_ident("operation name");
            decl.ops.push_back(std::move(op));
        }
        expect_kw("end");
        return decl;
    }

    ClassDecl parse_class() {
        ClassDecl decl;
        decl.loc = cur().loc;
        expect_kw("class");
        decl.name = expect_ident("class name");
        if (at(Tok::LParen)) decl.params = parse_param_list();
        expect_kw("implements");
        do {
            decl.implements.push_back(parse_iface_ref());
        } while (accept(Tok::Comma));
        expect_kw("begin");
        while (at_kw("var")) {
            advance();
            std::vector<std::string> names;
            names.push_back(expect_ident("variable name"));
            while (accept(Tok::Comma)) names.push_back(expect_ident("variable name"));
            expect(Tok::Colon, "':'");
            bool is_bool;
            if (accept_kw("bool"))
                is_bool = true;
            else if (accept_kw("int"))
                is_bool = false;
            else {
                error_here("expected 'int' or 'bool'");
                throw SyntaxAbort{};
            }
            for (auto& n : names) decl.vars.emplace_back(std::move(n), is_bool);
        }
        while (at_kw("op") || at_kw("with")) {
            try {
                decl.methods.push_back(parse_method());
            } catch (SyntaxAbort&) {
                sync_to_method_boundary();
            }
        }
        expect_kw("end");
        return decl;
    }

    void sync_to_method_boundary() {
        while (!at(Tok::End) && !at_kw("op") && !at_kw("with") && !at_kw("end")) advance();
    }

    MethodDecl parse_method() {
        MethodDecl m;
        m.loc = cur().loc;
        if (accept_kw("with")) m.cointerface = expect_ident("cointerface name");
        expect_kw("op");
        m.name = expect_ident("method name");
        expect(Tok::DefEq, "'=='");
        m.body = parse_stmt_seq();
        if (m.body.empty()) {
            diags_.error(m.loc, "method '" + m.name + "' has an empty body", file_);
        }
        return m;
    }

    // ---- statements ----

    bool at_stmt_seq_end() const {
        return at(Tok::End) || at_kw("end") || at_kw("op") || at_kw("with") || at_kw("od") ||
               at_kw("else") || at_kw("fi");
    }

    StmtSeq parse_stmt_seq() {
        StmtSeq seq;
        while (!at_stmt_seq_end()) {
            seq.push_back(parse_stmt());
            attach_annotations(*seq.back());
            if (accept(Tok::Semi)) {
                attach_annotations(*seq.back());
                continue;
            }
            break;  // no separator: sequence ends
        }
        return seq;
    }

    // Block comments trailing the statement (before or after its ';') carry
    // the timing directives.
    void attach_annotations(Stmt& s) {
        for (const Token& t : pending_) {
            TimingAnnotation a = extract_annotation(t.text, diags_, t.loc, file_);
            bool has_any = a.best != 0 || a.worst != 0 || a.deadline.has_value();
            if (!has_any) continue;
            if (s.ann.best != 0 || s.ann.worst != 0 || s.ann.deadline) {
                diags_.error(t.loc, "duplicate timing annotation on one statement", file_);
            } else {
                s.ann = a;
            }
        }
        pending_.clear();
    }

    StmtPtr parse_stmt() {
        pending_.clear();  // comments before a statement are prose
        auto s = std::make_shared<Stmt>();
        s->loc = cur().loc;
        if (accept_kw("skip")) {
            s->kind = Stmt::Kind::Skip;
            return s;
        }
        if (accept_kw("release")) {
            s->kind = Stmt::Kind::Release;
            return s;
        }
        if (at_kw("await")) {
            advance();
            s->kind = Stmt::Kind::Await;
            s->guard = parse_guard();
            return s;
        }
        if (accept_kw("while")) {
            s->kind = Stmt::Kind::While;
            s->expr = parse_expr();
            expect_kw("do");
            s->body = parse_stmt_seq();
            expect_kw("od");
            return s;
        }
        if (accept_kw("if")) {
            s->kind = Stmt::Kind::If;
            s->expr = parse_expr();
            expect_kw("then");
            s->body = parse_stmt_seq();
            expect_kw("else");
            s->else_body = parse_stmt_seq();
            expect_kw("fi");
            return s;
        }
        if (at(Tok::Bang)) {  // !x.m() or !m()
            advance();
            s->kind = Stmt::Kind::AsyncCall;
            parse_call_target(*s);
            return s;
        }
        if (at(Tok::Ident) && !is_keyword(cur().text)) {
            if (peek().kind == Tok::Assign) {
                s->kind = Stmt::Kind::Assign;
                s->var = expect_ident("variable");
                expect(Tok::Assign, "':='");
                s->expr = parse_expr();
                return s;
            }
            if (peek().kind == Tok::Question) {
                s->kind = Stmt::Kind::BlockingReply;
                s->label = expect_ident("label");
                expect(Tok::Question, "'?'");
                return s;
            }
            if (peek().kind == Tok::Bang) {
                s->kind = Stmt::Kind::AsyncCall;
                s->label = expect_ident("label");
                expect(Tok::Bang, "'!'");
                parse_call_target(*s);
                return s;
            }
        }
        error_here("expected a statement");
        throw SyntaxAbort{};
    }

    void parse_call_target(Stmt& s) {
        std::string first = expect_ident("call target or method");
        if (accept(Tok::Dot)) {
            s.target = first;
            s.method = expect_ident("method name");
        } else {
            s.method = first;  // receiver omitted: self call
        }
        expect(Tok::LParen, "'('");
        expect(Tok::RParen, "')'");
    }

    // ---- guards ----
    //
    // g ::= b | t? | ~g | g /\ g, with \/ accepted as the dual. Parenthesized
    // groups containing a reply test parse as guards, others as expressions.

    GuardPtr parse_guard() { return parse_guard_or(); }

    GuardPtr parse_guard_or() {
        GuardPtr g = parse_guard_and();
        while (at(Tok::OrOr)) {
            SourceLoc l = cur().loc;
            advance();
            GuardPtr r = parse_guard_and();
            // a \/ b  desugars to  ~(~a /\ ~b)
            g = Guard::negate(Guard::conj(Guard::negate(g, l), Guard::negate(r, l), l), l);
        }
        return g;
    }

    GuardPtr parse_guard_and() {
        GuardPtr g = parse_guard_unary();
        while (at(Tok::AndAnd)) {
            SourceLoc l = cur().loc;
            advance();
            g = Guard::conj(g, parse_guard_unary(), l);
        }
        return g;
    }

    GuardPtr parse_guard_unary() {
        if (at(Tok::Tilde) || at(Tok::Bang)) {
            SourceLoc l = cur().loc;
            advance();
            return Guard::negate(parse_guard_unary(), l);
        }
        return parse_guard_atom();
    }

    bool paren_group_has_reply_test() const {
        // Lookahead over the balanced group starting at the current '('.
        int depth = 0;
        for (std::size_t p = pos_; p < toks().size(); ++p) {
            const Token& t = toks()[p];
            if (t.kind == Tok::LParen) ++depth;
            if (t.kind == Tok::RParen) {
                if (--depth == 0) break;
            }
            if (t.kind == Tok::Question) return true;
        }
        return false;
    }

    GuardPtr parse_guard_atom() {
        SourceLoc l = cur().loc;
        if (at(Tok::Ident) && !is_keyword(cur().text) && peek().kind == Tok::Question) {
            std::string label = expect_ident("label");
            expect(Tok::Question, "'?'");
            return Guard::reply_test(label, l);
        }
        if (at(Tok::LParen) && paren_group_has_reply_test()) {
            advance();
            GuardPtr g = parse_guard();
            expect(Tok::RParen, "')'");
            return g;
        }
        return Guard::bool_expr(parse_expr(), l);
    }

    // ---- expressions ----
    //
    // Precedence: || < && < comparison < additive < unary < primary.
    // The && and || loops stop short of a reply test so guard parsing can
    // take over at that point.

    bool next_is_reply_test() const {
        return at(Tok::Ident) && !is_keyword(cur().text) && peek().kind == Tok::Question;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (at(Tok::OrOr)) {
            std::size_t save = pos_;
            advance();
            if (next_is_reply_test()) {
                pos_ = save;
                break;
            }
            e = Expr::binary(BinOp::Or, e, parse_and());
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_cmp();
        while (at(Tok::AndAnd)) {
            std::size_t save = pos_;
            advance();
            if (next_is_reply_test()) {
                pos_ = save;
                break;
            }
            e = Expr::binary(BinOp::And, e, parse_cmp());
        }
        return e;
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_add();
        for (;;) {
            BinOp op;
            if (at(Tok::Lt))
                op = BinOp::Lt;
            else if (at(Tok::Le))
                op = BinOp::Le;
            else if (at(Tok::Gt))
                op = BinOp::Gt;
            else if (at(Tok::Ge))
                op = BinOp::Ge;
            else if (at(Tok::EqEq) || at(Tok::DefEq))
                op = BinOp::Eq;
            else if (at(Tok::Ne))
                op = BinOp::Ne;
            else
                break;
            advance();
            e = Expr::binary(op, e, parse_add());
        }
        return e;
    }

    ExprPtr parse_add() {
        ExprPtr e = parse_unary();
        for (;;) {
            BinOp op;
            if (at(Tok::Plus))
                op = BinOp::Add;
            else if (at(Tok::Minus))
                op = BinOp::Sub;
            else
                break;
            advance();
            e = Expr::binary(op, e, parse_unary());
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at(Tok::Minus)) {
            advance();
            return Expr::unary(UnOp::Neg, parse_unary());
        }
        if (at(Tok::Bang) || at(Tok::Tilde)) {
            advance();
            return Expr::unary(UnOp::Not, parse_unary());
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        if (at(Tok::Int)) {
            long v = cur().value;
            advance();
            return Expr::int_lit(v);
        }
        if (accept_kw("true")) return Expr::bool_lit(true);
        if (accept_kw("false")) return Expr::bool_lit(false);
        if (at(Tok::LParen)) {
            advance();
            ExprPtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (at(Tok::Ident) && !is_keyword(cur().text)) {
            std::string n = cur().text;
            advance();
            return Expr::var(n);
        }
        error_here("expected an expression");
        throw SyntaxAbort{};
    }

    DiagnosticList& diags_;
    std::string file_;
    Lexer lexer_;
    std::size_t pos_ = 0;
    std::vector<Token> pending_;
};

}  // namespace

SourceModel parse_model(std::string_view text, DiagnosticList& diags, std::string file) {
    Parser p(text, diags, std::move(file));
    return p.parse();
}

// -- helper collections --------------------------------------------------------

void collect_labels(const GuardPtr& g, std::vector<std::string>& out) {
    if (!g) return;
    switch (g->kind) {
        case Guard::Kind::ReplyTest: out.push_back(g->label); break;
        case Guard::Kind::Not: collect_labels(g->a, out); break;
        case Guard::Kind::And:
            collect_labels(g->a, out);
            collect_labels(g->b, out);
            break;
        case Guard::Kind::BoolExpr: break;
    }
}

void collect_labels(const StmtSeq& body, std::vector<std::string>& out) {
    for (const auto& s : body) {
        switch (s->kind) {
            case Stmt::Kind::AsyncCall:
                if (!s->label.empty()) out.push_back(s->label);
                break;
            case Stmt::Kind::While: collect_labels(s->body, out); break;
            case Stmt::Kind::If:
                collect_labels(s->body, out);
                collect_labels(s->else_body, out);
                break;
            default: break;
        }
    }
}

void collect_methods(const StmtSeq& body, std::vector<std::string>& out) {
    for (const auto& s : body) {
        switch (s->kind) {
            case Stmt::Kind::AsyncCall: out.push_back(s->method); break;
            case Stmt::Kind::While: collect_methods(s->body, out); break;
            case Stmt::Kind::If:
                collect_methods(s->body, out);
                collect_methods(s->else_body, out);
                break;
            default: break;
        }
    }
}

}  // namespace creol2ta::creol
